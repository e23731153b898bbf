"""Boundary convergence detection and product-region distance estimates.

The thin-part geometry of a family is summarized by product-region images:
the coordinates away from the thin curves, plus one upper-half-plane point
(twist, 1/length) per thin curve.  Distances between images approximate the
Teichmueller distance up to a configured additive slack; the away-part uses
the supremum of the coordinate half-plane distances as a documented
order-level stand-in (compactness is all the certificates need from it).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .certs import AffineCert, cert_ratio
from .curves import CurveClass, WeightedMulticurve, intersection_vector
from .errors import GraftLabError, IncomparableThinRegimesError, ThinRegimeError
from .grafting import GraftRaySurrogate, RaySnapshot
from .hyperbolic import half_plane_distance_interval
from .intervals import CertifiedInterval, imax
from .pants import PantsDecomposition
from .teichray import TeichRayModel, snapshot as teich_snapshot


@dataclass(frozen=True)
class ProductRegionImage:
    thin: tuple[str, ...]
    half_planes: dict[str, tuple[CertifiedInterval, CertifiedInterval]]
    pi0: dict[str, tuple[CertifiedInterval, CertifiedInterval]]

    def __post_init__(self):
        for cid in self.thin:
            if cid not in self.half_planes:
                raise GraftLabError(f"thin curve {cid!r} missing its half-plane")


def product_region_image(snap: RaySnapshot, thin: tuple[str, ...],
                         eps0: float = 0.1) -> ProductRegionImage:
    """Split a ray snapshot into thin half-plane points and away-data.

    Every thin curve must be certified shorter than eps0 at this snapshot.
    """
    half_planes: dict[str, tuple[CertifiedInterval, CertifiedInterval]] = {}
    pi0: dict[str, tuple[CertifiedInterval, CertifiedInterval]] = {}
    for cid, box in snap.len_bounds.items():
        if cid in thin:
            if box.hi > eps0:
                raise ThinRegimeError(
                    f"curve {cid!r} not certified thin at t={snap.t}: "
                    f"length <= {box.hi} vs eps0 = {eps0}")
            half_planes[cid] = (snap.twist_params[cid], box.recip())
        else:
            pi0[cid] = (snap.twist_params[cid], box)
    return ProductRegionImage(tuple(thin), half_planes, pi0)


def minsky_distance(p: ProductRegionImage, q: ProductRegionImage,
                    slack: float = 1.0) -> CertifiedInterval:
    """Sup-style distance between product-region images, widened by slack.

    Thin components use half the hyperbolic half-plane metric on the points
    (twist, 1/length); the away component takes the supremum of coordinate
    half-plane distances.  Symmetric; triangle inequality holds up to slack.
    """
    if p.thin != q.thin:
        raise IncomparableThinRegimesError(
            f"incomparable thin regimes: {p.thin} vs {q.thin}")
    comps = []
    for cid in p.thin:
        x1, y1 = p.half_planes[cid]
        x2, y2 = q.half_planes[cid]
        comps.append(half_plane_distance_interval(x1, y1, x2, y2))
    for cid in sorted(set(p.pi0) & set(q.pi0)):
        x1, box1 = p.pi0[cid]
        x2, box2 = q.pi0[cid]
        comps.append(half_plane_distance_interval(x1, box1.recip(),
                                                  x2, box2.recip()))
    if not comps:
        raise GraftLabError("nothing to compare")
    rough = imax(*comps)
    return CertifiedInterval(max(rough.lo - slack, 0.0), rough.hi + slack)


@dataclass(frozen=True)
class CompactnessReport:
    ok: bool
    witnesses: tuple[tuple[str, float, str, float], ...]  # (what, t, curve, value)


def pi0_compactness_check(images: list[tuple[float, ProductRegionImage]],
                          big_m: float = 20.0, big_t: float = 20.0
                          ) -> CompactnessReport:
    """Check the away-coordinates of a family stay in a fixed box.

    True iff every non-thin length lies in [1/M, M] and every non-thin twist
    parameter in [-T, T]; the witnesses list the extremal offenders (or the
    extremal values when the check passes).
    """
    worst: list[tuple[str, float, str, float]] = []
    ok = True
    ext: dict[str, tuple[float, float, str]] = {}
    for t, image in images:
        for cid, (tw, box) in image.pi0.items():
            for kind, val in (("len_hi", box.hi), ("len_lo", box.lo),
                              ("twist_hi", tw.hi), ("twist_lo", tw.lo)):
                cur = ext.get(kind)
                if (cur is None
                        or (kind.endswith("hi") and val > cur[0])
                        or (kind.endswith("lo") and val < cur[0])):
                    ext[kind] = (val, t, cid)
            if box.hi > big_m or box.lo < 1.0 / big_m:
                ok = False
            if tw.hi > big_t or tw.lo < -big_t:
                ok = False
    for kind, (val, t, cid) in sorted(ext.items()):
        worst.append((kind, t, cid, val))
    return CompactnessReport(ok, tuple(worst))


# ---------------------------------------------------------------------------
# limits at the boundary
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProjectiveLimit:
    catalog: tuple[str, ...]
    normalized: dict[str, CertifiedInterval]
    limit_class: dict[str, float] | None
    conclusive: bool
    ratios: dict = field(default_factory=dict)


def _pairwise_ratio(certs: dict[str, AffineCert], a: str, b: str) -> CertifiedInterval:
    return cert_ratio(certs[a], certs[b])


def thurston_limit(family: list[RaySnapshot], catalog: list[CurveClass],
                   decomp: PantsDecomposition,
                   candidates: list[dict[str, float]] | None = None
                   ) -> ProjectiveLimit:
    """Detect the projective limit of a ray family from certified lengths.

    Normalizes the certified catalog lengths at the largest time, then
    matches the pairwise ratios against intersection-number ratios with the
    candidate classes.  When the intervals are too wide to single out one
    candidate the result is flagged inconclusive (not an error).
    """
    if not family:
        raise GraftLabError("empty family")
    snap = max(family, key=lambda s: s.t)
    certs = {name: c for name, c in snap.length_certs.items()}
    names = [a.name for a in catalog if a.name in certs]
    if len(names) < 2:
        raise GraftLabError("need certified lengths for at least two curves")
    scale = 2.0 * math.log(snap.t) if snap.t > 1.0 else 1.0
    normalized = {}
    raw_mid = {}
    for name in names:
        box = certs[name].interval()
        normalized[name] = box * (1.0 / scale)
        raw_mid[name] = box.mid
    top = max(names, key=lambda n: raw_mid[n])
    normalized = {n: cert_ratio(certs[n], certs[top]) for n in names}

    ivec = {a.name: intersection_vector(decomp, a) for a in catalog}
    if candidates is None:
        comp_sets: list[tuple[str, ...]] = []
        seen = set()
        for snap2 in family:
            pass
        all_curves = tuple(decomp.curve_ids)
        candidates = []
        # natural candidates: unit weights on each nonempty subset that some
        # catalog curve meets, plus each single curve
        base = tuple(cid for cid in all_curves)
        candidates.append({cid: 1.0 for cid in base})
        for cid in base:
            candidates.append({cid: 1.0})
    matches = []
    ratio_record = {}
    for cand in candidates:
        pairing = {}
        ok = True
        for name in names:
            pairing[name] = sum(w * ivec[name].get(cid, 0)
                                for cid, w in cand.items())
        if all(v == 0.0 for v in pairing.values()):
            continue
        for a in names:
            for b in names:
                if a >= b or pairing[b] == 0.0:
                    continue
                if pairing[a] == 0.0 and pairing[b] > 0.0:
                    # the ratio must shrink toward zero; ask for smallness
                    box = _pairwise_ratio(certs, a, b)
                    ratio_record[(a, b)] = box
                    if box.lo > 0.25:
                        ok = False
                    continue
                target = pairing[a] / pairing[b]
                box = _pairwise_ratio(certs, a, b)
                ratio_record[(a, b)] = box
                if not box.contains(target):
                    ok = False
        if ok:
            matches.append(cand)
    if len(matches) == 1:
        return ProjectiveLimit(tuple(names), normalized, matches[0], True,
                               ratio_record)
    return ProjectiveLimit(tuple(names), normalized, None, False, ratio_record)


# ---------------------------------------------------------------------------
# quasi-geodesic certificate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertificateReport:
    sup_distance: CertifiedInterval
    bound: float
    passed: bool
    per_t: tuple[tuple[float, CertifiedInterval], ...]
    log_ratio: dict[str, CertifiedInterval]


def quasi_geodesic_certificate(g: GraftRaySurrogate, m: TeichRayModel,
                               t_grid: list[float], bound: float = 25.0,
                               slack: float = 1.0, eps0: float = 0.1
                               ) -> CertificateReport:
    """Sup of the product-region distance between the two rays over a grid.

    Both rays must share the base surface and the weighted system, and every
    swept curve must be certified eps0-thin on both sides at every grid
    point (the failing t is named otherwise).  Passes iff the upper end of
    the sup interval stays at or under the bound.
    """
    if g.base is not m.base and g.base.lengths != m.base.lengths:
        raise GraftLabError("certificate needs a common base surface")
    if g.lam != m.lam:
        raise GraftLabError("certificate needs a common weighted system")
    thin = tuple(g.lam.components)
    per_t = []
    log_ratio: dict[str, CertifiedInterval] = {}
    for t in sorted(t_grid):
        snap_g = g.at(t)
        snap_m = teich_snapshot(m, t)
        try:
            img_g = product_region_image(snap_g, thin, eps0)
            img_m = product_region_image(snap_m, thin, eps0)
        except ThinRegimeError as exc:
            raise ThinRegimeError(f"at t = {t}: {exc}") from exc
        per_t.append((t, minsky_distance(img_g, img_m, slack)))
        for cid in thin:
            ratio = (snap_m.len_bounds[cid] / snap_g.len_bounds[cid]).log().abs()
            if cid in log_ratio:
                log_ratio[cid] = imax(log_ratio[cid], ratio)
            else:
                log_ratio[cid] = ratio
    sup = imax(*[box for _, box in per_t])
    return CertificateReport(sup, bound, sup.hi <= bound, tuple(per_t), log_ratio)


def predicted_log_ratio(g: GraftRaySurrogate, m: TeichRayModel, cid: str) -> float:
    """Large-t limit of the worst log length ratio between the two rays."""
    c_i = g.weight(cid)
    return math.log(_pi_over(2.0 * g.params.theta0) * g.params.c_max
                    / (c_i * m.k0))


def _pi_over(x: float) -> float:
    return math.pi / x
