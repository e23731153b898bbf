"""Order-level model of the Teichmueller geodesic ray for closed-leaf data.

The ray stretches the flat annuli swept by the chosen curves: the annulus of
the curve gamma_i has modulus M_i at the base and (t+1) M_i at time t, so
the model core length is pi / ((t+1) M_i).  Everything the model asserts
about the actual hyperbolic surface carries an order constant kappa and is
reported as an interval; quantities of the model itself (dilatation,
distance along the ray, annulus data) are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .certs import AffineCert
from .curves import (CurveClass, WeightedMulticurve, Wind, dual_curve,
                     intersection_vector)
from .errors import GraftLabError
from .grafting import RaySnapshot
from .intervals import CertifiedInterval
from .pants import PantsDecomposition
from .surface import PantsSurface

_PI = math.pi


def dilatation_of_t(t: float) -> float:
    """Maximal dilatation K(t) of the time-t deformation.

    The parametrization maps t to the deformation with k = t/(t+2); the
    quotient (1+k)/(1-k) simplifies exactly to t+1, which is what this
    returns (the unsimplified form loses precision for large t).
    """
    if t < 0.0:
        raise GraftLabError("ray time must be nonnegative")
    return t + 1.0


def distance_along(t: float) -> float:
    """Teichmueller distance from the base, half the log of the dilatation."""
    return 0.5 * math.log(dilatation_of_t(t))


@dataclass(frozen=True)
class ThickData:
    twist_bounded: bool
    twist_budget: dict[str, CertifiedInterval]
    thick_lengths: dict[str, CertifiedInterval]


@dataclass(frozen=True)
class TeichRayModel:
    base: PantsSurface
    lam: WeightedMulticurve
    k0: float = 1.0        # moduli normalization M_i = c_i k0 / len_i
    kappa: float = 4.0     # order constant for claims about the true metric
    catalog: tuple[CurveClass, ...] = ()
    moduli_override: dict = field(default_factory=dict)

    def __post_init__(self):
        for cid in self.lam.components:
            self.base.topology.curve(cid)
        if self.k0 <= 0.0 or self.kappa < 1.0:
            raise GraftLabError("need k0 > 0 and kappa >= 1")

    def modulus(self, cid: str) -> float:
        """Base annulus modulus of a swept curve."""
        if cid in self.moduli_override:
            return self.moduli_override[cid]
        w = self.lam.weight(cid)
        if w <= 0.0:
            raise GraftLabError(f"{cid!r} is not swept by the ray data")
        return w * self.k0 / self.base.length(cid)

    def modulus_at(self, t: float, cid: str) -> float:
        return dilatation_of_t(t) * self.modulus(cid)

    # -- pinched limit surface ---------------------------------------------------

    def pinched_surface(self) -> PantsSurface:
        """Base surface with the swept curves pinched to punctures."""
        topo = self.base.topology
        keep = tuple(e for e in topo.curves if e.id not in self.lam.components)
        pinched = PantsDecomposition(topo.num_pants, keep,
                                     dict(topo.marking_shift))
        lengths = {e.id: self.base.length(e.id) for e in keep}
        twists = {e.id: self.base.twist(e.id) for e in keep}
        return PantsSurface(pinched, lengths, twists)


def model_core_length(m: TeichRayModel, t: float, cid: str) -> float:
    """Core length pi / ((t+1) M_i) of the time-t annulus of the curve.

    Same order as (not equal to) the hyperbolic length on the surface.
    """
    return _PI / (dilatation_of_t(t) * m.modulus(cid))


def model_twist_and_thick(m: TeichRayModel, t: float) -> ThickData:
    """Bounded-twist flag with budgets, and order intervals for the lengths
    of catalog curves disjoint from the swept system.

    Thick lengths bracket the pinched-limit value by the order constant;
    twist budgets are calibrated at t = 0 and held constant along the ray.
    """
    if t < 0.0:
        raise GraftLabError("ray time must be nonnegative")
    budgets: dict[str, CertifiedInterval] = {}
    for cid in m.base.topology.curve_ids:
        d = dual_curve(m.base.topology, cid)
        prod = abs(m.base.twisting_number(d, cid)) * m.base.length(cid)
        budgets[cid] = CertifiedInterval(0.0, m.kappa * (prod + 1.0))
    limit = m.pinched_surface()
    thick: dict[str, CertifiedInterval] = {}
    for alpha in m.catalog:
        ivec = intersection_vector(m.base.topology, alpha)
        if any(ivec[cid] for cid in m.lam.components):
            continue
        if any(isinstance(s, Wind) and s.curve in m.lam.components
               for s in alpha.steps):
            continue
        ell = limit.geodesic_length(alpha)
        thick[alpha.name] = CertifiedInterval(ell / m.kappa, ell * m.kappa)
    return ThickData(True, budgets, thick)


def snapshot(m: TeichRayModel, t: float) -> RaySnapshot:
    """Ray state in the same shape the grafting surrogate produces.

    Swept curves carry the exact model core length; other curves carry the
    kappa-wide order interval around their base length; twist parameters
    follow the base (their products stay bounded along the ray).
    """
    thick = model_twist_and_thick(m, t)
    len_bounds: dict[str, CertifiedInterval] = {}
    for cid in m.base.topology.curve_ids:
        if m.lam.weight(cid) > 0.0:
            len_bounds[cid] = CertifiedInterval.point(model_core_length(m, t, cid))
        else:
            ell = m.base.length(cid)
            len_bounds[cid] = CertifiedInterval(ell / m.kappa, ell * m.kappa)
    params = {cid: CertifiedInterval.point(m.base.twist(cid))
              for cid in m.base.topology.curve_ids}
    d = distance_along(t)
    thurston = {}
    certs: dict[str, AffineCert] = {}
    return RaySnapshot(t, len_bounds, thick.twist_budget, params,
                       CertifiedInterval.point(d), thurston, certs)
