"""Certified surrogate for grafting rays.

Grafting inserts flat cylinders of height t * weight along the chosen pants
curves.  The surrogate never uniformizes the result; instead every queried
quantity is an interval certified by the standard comparison arguments:

* two-sided bounds for the grafted curve lengths (sector model above,
  quasiconformal estimate below),
* a quasiconformal bound for the Teichmueller distance to the base,
* twist budgets assembled from the dual-curve horizontal-arc decomposition,
* certified length intervals for catalog curves, exposed as affine
  certificates over shared variables so that length ratios stay sharp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .certs import AffineCert
from .curves import (Arc, CurveClass, WeightedMulticurve, Wind, dual_curve,
                     intersection_vector, resolve)
from .errors import GraftLabError, SegmentDecompositionError
from .estimates import BrokenArcEstimator
from .hyperbolic import AnnulusModel, hexagon_side_interval, return_arc_length_interval
from .intervals import CertifiedInterval, imax
from .pants import PantsDecomposition
from .surface import PantsSurface

_PI = math.pi


def collar_half_width(ell: float) -> float:
    """Half-width of the standard embedded collar of a geodesic of length ell."""
    return math.asinh(1.0 / math.sinh(0.5 * ell))


def theta0_for(base: PantsSurface, lam: WeightedMulticurve) -> float:
    """Sector half-angle of the embedded collar, depending only on the base.

    Half the collar width guarantees embeddedness; the angle is the slope of
    the equidistant ray at that distance from a vertical geodesic.
    """
    worst = max(base.length(cid) for cid in lam.components)
    eps0 = 0.5 * collar_half_width(worst)
    return math.acos(1.0 / math.cosh(eps0))


def wolpert_transfer(len_x: float, c: float) -> CertifiedInterval:
    """Length interval forced by a Teichmueller-distance bound c >= 0."""
    if len_x <= 0.0 or c < 0.0:
        raise GraftLabError("wolpert_transfer needs a positive length and c >= 0")
    box = CertifiedInterval.point(len_x)
    lo = (box * CertifiedInterval.point(-2.0 * c).exp()).lo
    hi = (box * CertifiedInterval.point(2.0 * c).exp()).hi
    return CertifiedInterval(lo, hi)


@dataclass(frozen=True)
class GraftParams:
    base: PantsSurface
    lam: WeightedMulticurve
    theta0: float
    t0: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.theta0 < 0.5 * _PI:
            raise GraftLabError(f"theta0 must lie in (0, pi/2), got {self.theta0}")
        for cid in self.lam.components:
            self.base.topology.curve(cid)

    @staticmethod
    def create(base: PantsSurface, lam: WeightedMulticurve,
               theta0: float | None = None, t0: float = 1.0) -> "GraftParams":
        return GraftParams(base, lam, theta0 if theta0 is not None
                           else theta0_for(base, lam), t0)

    @property
    def c_max(self) -> float:
        return self.lam.max_weight


@dataclass(frozen=True)
class RaySnapshot:
    """Certified state of one ray at one time."""

    t: float
    len_bounds: dict[str, CertifiedInterval]
    twist_budget: dict[str, CertifiedInterval]       # [0, B] for Tw * len
    twist_params: dict[str, CertifiedInterval]
    dist_to_base: CertifiedInterval
    thurston_len: dict[str, float]
    length_certs: dict[str, AffineCert]


class GraftRaySurrogate:
    """Interval surrogate for one grafting ray; immutable and pure."""

    def __init__(self, params: GraftParams, catalog: list[CurveClass] = (),
                 estimator: BrokenArcEstimator | None = None):
        self.params = params
        self.base = params.base
        self.lam = params.lam
        self.topology: PantsDecomposition = params.base.topology
        self.catalog = list(catalog)
        self.estimator = estimator
        self.duals = {cid: dual_curve(self.topology, cid)
                      for cid in self.topology.curve_ids}
        self.base_dual_len = {cid: self.base.geodesic_length(d)
                              for cid, d in self.duals.items()}
        # offset between the dual twisting number and the twist parameter,
        # sigma-independent up to 1; +2 covers both remark slops
        self.twist_offset = {
            cid: abs(self.base.twisting_number(self.duals[cid], cid)
                     - self.base.twist(cid)) + 2.0
            for cid in self.topology.curve_ids}
        self.base_len = {cid: self.base.length(cid)
                         for cid in self.topology.curve_ids}
        if estimator is not None:
            need = list(self.duals.values()) + self.catalog
            missing = [c.name for c in need if c.name not in estimator.constants]
            if missing:
                estimator.calibrate(
                    [c for c in need if c.name in missing])

    # -- weights ---------------------------------------------------------------

    def weight(self, cid: str) -> float:
        return self.lam.weight(cid)

    def is_grafted(self, cid: str) -> bool:
        return self.weight(cid) > 0.0

    # -- contract operations -----------------------------------------------------

    def thurston_length(self, t: float, alpha: CurveClass) -> float:
        """Length in the composite flat-plus-hyperbolic metric; an upper
        bound for the hyperbolic length at every t >= 0."""
        if t < 0.0:
            raise GraftLabError("grafting time must be nonnegative")
        ivec = intersection_vector(self.topology, alpha)
        rate = sum(self.weight(cid) * n for cid, n in ivec.items())
        return self.base.geodesic_length(alpha) + t * rate

    def grafted_length_bounds(self, t: float, cid: str) -> CertifiedInterval:
        """Two-sided bounds for the length of a grafted curve at time t."""
        if t < 0.0:
            raise GraftLabError("grafting time must be nonnegative")
        if not self.is_grafted(cid):
            raise GraftLabError(f"{cid!r} is not a component of the grafted system")
        ell = self.base_len[cid]
        if t == 0.0:
            return CertifiedInterval.point(ell)
        th2 = 2.0 * self.params.theta0
        lo = (CertifiedInterval.point(th2)
              / (th2 + CertifiedInterval.point(self.params.c_max) * t) * ell).lo
        hi = (CertifiedInterval.point(_PI)
              / (_PI + CertifiedInterval.point(self.weight(cid)) * t) * ell).hi
        return CertifiedInterval(max(lo, 0.0), hi)

    def annular_cover_upper_bound(self, t: float, cid: str) -> float:
        """Core-length bound from moduli superadditivity of the annular cover.

        The cover of the base contributes modulus pi/len; the inserted
        cylinder contributes its own modulus; core length is pi over the sum.
        """
        ell = self.base_len[cid]
        mod = _PI / ell
        if t > 0.0:
            mod += AnnulusModel.cylinder(self.weight(cid) * t, ell).modulus()
        return _PI / mod

    def qc_distance_bound(self, t: float) -> float:
        """Teichmueller distance bound from the collar-sector stretch map."""
        if t < 0.0:
            raise GraftLabError("grafting time must be nonnegative")
        th2 = 2.0 * self.params.theta0
        return 0.5 * math.log((th2 + self.params.c_max * t) / th2)

    def twist_budget(self, t: float, cid: str,
                     t0: float | None = None) -> CertifiedInterval:
        """Budget [0, B(t)] for the dual twist product about a grafted curve.

        B(t) assembles the two horizontal-arc estimates of the inserted
        cylinder with the broken-arc constant; it stays bounded as t grows.
        """
        t0 = self.params.t0 if t0 is None else t0
        c_j = self.weight(cid)
        if t <= 0.0 or not 0.0 < t0 < c_j * t:
            raise SegmentDecompositionError(
                f"segment decomposition invalid: need 0 < t0 < c_j*t, got "
                f"t0={t0}, c_j*t={c_j * t}")
        arcs = self.base_dual_len[cid]
        angle = t0 * _PI / (2.0 * c_j * t)
        cot = math.cos(angle) / math.sin(angle)
        upper_len = self.grafted_length_bounds(t, cid).hi
        c_cal = self._dual_constant(cid)
        b = (arcs + 2.0 * t0 + 2.0 * (2.0 * math.log(cot))
             - 4.0 * math.log(1.0 / upper_len) + c_cal)
        box = CertifiedInterval.point(b) + CertifiedInterval(-1e-12, 1e-12)
        return CertifiedInterval(0.0, max(box.hi, 0.0))

    def _dual_constant(self, cid: str) -> float:
        if self.estimator is not None:
            name = self.duals[cid].name
            if name in self.estimator.constants:
                return self.estimator.constants[name]
        return 0.0

    def _dual_gap(self, cid: str) -> float:
        if self.estimator is not None:
            name = self.duals[cid].name
            if name in self.estimator.gap_constants:
                return self.estimator.gap_constants[name]
        return 0.0

    # -- certified state ----------------------------------------------------------

    def length_interval(self, t: float, cid: str) -> CertifiedInterval:
        """Certified length interval for any pants curve at time t."""
        if self.is_grafted(cid):
            return self.grafted_length_bounds(t, cid)
        ell = self.base_len[cid]
        if t == 0.0:
            return CertifiedInterval.point(ell)
        transferred = wolpert_transfer(ell, self.qc_distance_bound(t))
        # the flat metric dominates: disjoint curves never get longer
        return CertifiedInterval(max(transferred.lo, self.disjoint_length_floor(cid)),
                                 min(transferred.hi, ell))

    def disjoint_length_floor(self, cid: str) -> float:
        """Positive t-independent floor for a non-grafted curve length.

        The dual of the curve is disjoint from the grafted system, so its
        length never exceeds the base value; the collar estimate then caps
        how short the curve itself can get.
        """
        if self.is_grafted(cid):
            raise GraftLabError(f"{cid!r} is grafted; no uniform floor")
        cap = self.base_dual_len[cid]
        return 2.0 * math.asinh(1.0 / math.sinh(0.5 * cap))

    def tight_twist_product_bound(self, t: float, cid: str) -> float:
        """Upper bound for Tw(dual, curve) * len(curve) at time t.

        Sharper than the contract budget: uses exact perpendicular-arc
        interval lengths instead of their logarithmic approximations, plus
        the calibrated polygonal defect.
        """
        dual = self.duals[cid]
        s_top = self.thurston_length(t, dual)
        c_j = self.weight(cid)
        if c_j > 0.0 and c_j * t > self.params.t0:
            t0 = self.params.t0
            angle = t0 * _PI / (2.0 * c_j * t)
            cot = math.cos(angle) / math.sin(angle)
            s_top = min(s_top, self.base_dual_len[cid] + 4.0 * t0
                        + 4.0 * math.log(cot))
        h_lo = sum(count * iv.lo
                   for count, iv in self._arc_multiplicities(t, dual).values())
        ell_hi = self.length_interval(t, cid).hi
        i_count = max(1, intersection_vector(self.topology, dual)[cid])
        gap = self._dual_gap(cid)
        slop = (self.twist_offset[cid] + 1.0) * ell_hi
        return max(0.0, (s_top - h_lo + gap) / i_count + slop)

    def twist_param_product_bound(self, t: float, cid: str) -> float:
        """Upper bound for |twist parameter| * len at time t."""
        return (self.tight_twist_product_bound(t, cid)
                + self.twist_offset[cid] * self.length_interval(t, cid).hi)

    def _arc_interval(self, t: float, arc: Arc) -> CertifiedInterval:
        (a, b, c) = (self._half_interval(t, arc.pant, s)
                     for s in (arc.slot_from,
                               (arc.slot_from + 1) % 3, (arc.slot_from + 2) % 3))
        if arc.is_return():
            return return_arc_length_interval(a, b, c)
        offset = (arc.slot_to - arc.slot_from) % 3
        if offset == 1:
            return hexagon_side_interval(a, b, c)
        return hexagon_side_interval(a, c, b)

    def _half_interval(self, t: float, pant: int, slot: int) -> CertifiedInterval:
        att = self.topology.attachment(pant, slot)
        if att is None:
            raise GraftLabError("certified arcs need attached (non-puncture) slots")
        return self.length_interval(t, att[0]) * 0.5

    def _arc_multiplicities(self, t: float, alpha: CurveClass):
        out: dict[tuple, tuple[int, CertifiedInterval]] = {}
        for arc in alpha.arcs():
            key = (arc.pant, min(arc.slot_from, arc.slot_to),
                   max(arc.slot_from, arc.slot_to))
            if key in out:
                count, iv = out[key]
                out[key] = (count + 1, iv)
            else:
                out[key] = (1, self._arc_interval(t, arc))
        return out

    def length_certificate(self, t: float, alpha: CurveClass) -> AffineCert:
        """Certified length of a catalog curve as an affine certificate.

        Perpendicular-arc lengths are shared variables (keyed by the arc), so
        ratios between certificates of different curves stay correlated; the
        V-arc travel and the polygonal defect are private variables.
        """
        res = resolve(self.topology, alpha.steps)
        shared = tuple(
            (f"arc:{k[0]}:{k[1]}:{k[2]}", float(n), iv)
            for k, (n, iv) in sorted(self._arc_multiplicities(t, alpha).items()))
        own: list[CertifiedInterval] = []
        wind_turns: dict[str, int] = {}
        for entry in res.entries:
            if isinstance(entry.step, Wind):
                wind_turns[entry.curve] = (wind_turns.get(entry.curve, 0)
                                           + abs(entry.step.turns))
                continue
            cid = entry.curve
            ell_hi = self.length_interval(t, cid).hi
            extra = wind_turns.pop(cid, 0)
            v_hi = (self.twist_param_product_bound(t, cid)
                    + (1.0 + extra) * ell_hi)
            own.append(CertifiedInterval(0.0, v_hi))
        gap = self._curve_gap(alpha)
        own.append(CertifiedInterval(-gap, 0.0))
        return AffineCert(0.0, shared, tuple(own))

    def _curve_gap(self, alpha: CurveClass) -> float:
        if self.estimator is not None and alpha.name in self.estimator.gap_constants:
            return self.estimator.gap_constants[alpha.name]
        raise GraftLabError(f"no calibrated polygonal defect for {alpha.name!r}; "
                            "calibrate the estimator with this catalog first")

    def dist_to_base(self, t: float) -> CertifiedInterval:
        if t == 0.0:
            return CertifiedInterval.point(0.0)
        lo = max(0.5 * math.log((_PI + self.weight(cid) * t) / _PI)
                 for cid in self.lam.components)
        return CertifiedInterval(lo, self.qc_distance_bound(t))

    def twist_param_interval(self, t: float, cid: str) -> CertifiedInterval:
        if t == 0.0:
            return CertifiedInterval.point(self.base.twist(cid))
        cap = (CertifiedInterval.point(self.twist_param_product_bound(t, cid))
               / self.length_interval(t, cid)).hi
        return CertifiedInterval(-cap, cap)

    def at(self, t: float) -> RaySnapshot:
        """Certified snapshot of the ray at time t."""
        ids = self.topology.curve_ids
        len_bounds = {cid: self.length_interval(t, cid) for cid in ids}
        budgets = {cid: CertifiedInterval(
            0.0, self.tight_twist_product_bound(t, cid)) for cid in ids}
        params = {cid: self.twist_param_interval(t, cid) for cid in ids}
        thurston = {a.name: self.thurston_length(t, a) for a in self.catalog}
        certs = {}
        if self.estimator is not None:
            certs = {a.name: self.length_certificate(t, a) for a in self.catalog}
        return RaySnapshot(t, len_bounds, budgets, params,
                           self.dist_to_base(t), thurston, certs)
