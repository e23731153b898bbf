"""Hyperbolic-plane primitives on the upper half-plane model.

Conventions
-----------
Isometries are unit-determinant real 2x2 matrices acting as Moebius maps
z -> (az + b)/(cz + d).  Geodesics are recorded by their ideal endpoints on
the boundary R u {inf}; an ordered pair (p, q) is the geodesic oriented from
p to q.  Signed positions along an oriented geodesic use arclength with zero
at the summit of the semicircle over the real segment (or at height 1 on
vertical lines).  Orientation-reversing isometries (reflections) are carried
as determinant -1 matrices applied to the complex conjugate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonHyperbolicError, ProjectionUndefinedError
from .intervals import CertifiedInterval

INF = math.inf

_DET_TOL = 1e-9


@dataclass(frozen=True, slots=True)
class Mat2:
    """Real 2x2 matrix, normally kept at determinant 1."""

    a: float
    b: float
    c: float
    d: float

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> float:
        return self.a + self.d

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inv(self) -> "Mat2":
        det = self.det
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def normalized(self) -> "Mat2":
        """Rescale to determinant 1 (matrix must be orientation-preserving)."""
        det = self.det
        if det <= 0.0:
            raise ValueError(f"cannot normalize matrix with det {det}")
        if abs(det - 1.0) <= 1e-14:
            return self
        s = 1.0 / math.sqrt(det)
        return Mat2(self.a * s, self.b * s, self.c * s, self.d * s)

    def apply(self, z: complex) -> complex:
        """Moebius image of a point of the open upper half-plane."""
        return (self.a * z + self.b) / (self.c * z + self.d)

    def apply_ideal(self, x: float) -> float:
        """Moebius image of a boundary point (INF allowed)."""
        if math.isinf(x):
            if self.c == 0.0:
                return INF
            return self.a / self.c
        den = self.c * x + self.d
        if den == 0.0:
            return INF
        return (self.a * x + self.b) / den


IDENTITY = Mat2(1.0, 0.0, 0.0, 1.0)

# Quarter turn (rotation by +pi/2 about i) and half turn about i.  The half
# turn reverses the axis (0, inf) and swaps the two sides of it.
_C45 = math.sqrt(0.5)
TURN_LEFT = Mat2(_C45, _C45, -_C45, _C45)
HALF_TURN = Mat2(0.0, -1.0, 1.0, 0.0)


def axis_shift(d: float) -> Mat2:
    """Translation by signed distance d along the geodesic (0, inf)."""
    e = math.exp(0.5 * d)
    return Mat2(e, 0.0, 0.0, 1.0 / e)


def rotation(theta: float) -> Mat2:
    """Rotation by angle theta about the point i."""
    c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
    return Mat2(c, s, -s, c)


def fixed_points(m: Mat2) -> tuple[float, float]:
    """Ideal fixed points of a hyperbolic element, (repelling, attracting)."""
    tr = m.trace
    disc = tr * tr - 4.0 * m.det
    if disc <= 0.0:
        raise NonHyperbolicError(f"non-hyperbolic holonomy: trace {tr}")
    root = math.sqrt(disc)
    if m.c == 0.0:
        finite = m.b / (m.d - m.a) if m.d != m.a else INF
        # z -> a/d * z + ...: infinity attracts iff |a| > |d|
        if abs(m.a) > abs(m.d):
            return finite, INF
        return INF, finite
    z1 = ((m.a - m.d) + root) / (2.0 * m.c)
    z2 = ((m.a - m.d) - root) / (2.0 * m.c)
    # attracting fixed point has |c z + d| < 1
    if abs(m.c * z1 + m.d) > 1.0:
        return z2, z1
    return z1, z2


def translation_axis(m: Mat2) -> tuple[float, float]:
    """Oriented axis of a hyperbolic element, from repelling to attracting."""
    return fixed_points(m)


def point_distance(z: complex, w: complex) -> float:
    """Hyperbolic distance between two points of the upper half-plane."""
    num = (z.real - w.real) ** 2 + (z.imag - w.imag) ** 2
    return math.acosh(1.0 + num / (2.0 * z.imag * w.imag))


# ---------------------------------------------------------------------------
# trace <-> translation length
# ---------------------------------------------------------------------------


def trace_length(m: Mat2) -> float:
    """Translation length 2*acosh(|tr|/2) of a hyperbolic isometry.

    Raises NonHyperbolicError when |tr| < 2 (elliptic element); |tr| == 2
    (parabolic) returns 0.
    """
    half = abs(m.trace) / 2.0
    if half < 1.0:
        raise NonHyperbolicError(f"non-hyperbolic holonomy: |trace| = {2 * half} < 2")
    return 2.0 * math.acosh(half)


def length_to_trace(length: float) -> float:
    """Absolute trace of a hyperbolic isometry of the given length."""
    return 2.0 * math.cosh(0.5 * length)


# ---------------------------------------------------------------------------
# right-angled hexagon and pentagon trigonometry
# ---------------------------------------------------------------------------


def hexagon_side(a: float, b: float, c: float) -> float:
    """Side of a right-angled hexagon between the sides of lengths a and b.

    a, b, c are alternating side lengths (in a pair of pants: boundary
    half-lengths); the returned side is opposite c and satisfies
    cosh(H) = (cosh a cosh b + cosh c) / (sinh a sinh b).
    """
    if a <= 0.0 or b <= 0.0 or c <= 0.0:
        raise ValueError("hexagon sides must be positive")
    num = math.cosh(a) * math.cosh(b) + math.cosh(c)
    return math.acosh(num / (math.sinh(a) * math.sinh(b)))


def seam_length(a: float, b: float, c: float) -> float:
    """Like hexagon_side but allowing c == 0 (ideal opposite vertex)."""
    if a <= 0.0 or b <= 0.0 or c < 0.0:
        raise ValueError("invalid seam data")
    num = math.cosh(a) * math.cosh(b) + math.cosh(c)
    return math.acosh(num / (math.sinh(a) * math.sinh(b)))


def hexagon_side_interval(a: CertifiedInterval, b: CertifiedInterval,
                          c: CertifiedInterval) -> CertifiedInterval:
    """Interval extension of hexagon_side (decreasing in a, b; increasing in c)."""
    num = a.cosh() * b.cosh() + c.cosh()
    return (num / (a.sinh() * b.sinh())).acosh()


def return_arc_length(a: float, b: float, c: float) -> float:
    """Length of the arc from the a-side boundary back to itself.

    In a pair of pants with boundary half-lengths (a, b, c) this is the
    perpendicular from the boundary of half-length a to itself separating the
    other two boundary curves.  Derived by splitting the hexagon along the
    altitude into two right-angled pentagons: cosh(half) = sinh(s_ac) sinh(c)
    where s_ac is the seam between the a- and c-sides.
    """
    if a <= 0.0:
        raise ValueError("base boundary must have positive length")
    if c > 0.0:
        s_ac = seam_length(a, c, b)
        return 2.0 * math.acosh(math.sinh(s_ac) * math.sinh(c))
    if b > 0.0:
        s_ab = seam_length(a, b, c)
        return 2.0 * math.acosh(math.sinh(s_ab) * math.sinh(b))
    # both other ends are cusps: altitude from (0, inf) to the geodesic
    # joining the two ideal points -1, -e^(2a)... computed in closed form
    # below via the chart geometry: foot heights e^(+-mu), endpoints u, v.
    u, v = -math.exp(a), -1.0
    w = 0.5 * math.log(v / u)  # negative
    return 2.0 * math.asinh(1.0 / abs(math.sinh(w)))


def return_arc_length_interval(a: CertifiedInterval, b: CertifiedInterval,
                               c: CertifiedInterval) -> CertifiedInterval:
    """Interval extension of return_arc_length (positive b, c required)."""
    s_ac = hexagon_side_interval(a, c, b)
    return 2.0 * (s_ac.sinh() * c.sinh()).acosh()


def return_arc_foot(a: float, b: float, c: float) -> float:
    """Signed position of the near foot of the return arc on the a-boundary.

    Position is measured from the foot of the seam toward the b-side, along
    the boundary orientation induced by the pants; the far foot sits at the
    negated position.  Uses the pentagon relation cosh(mu) = sinh(b) cosh(s_ab)
    / sinh(h) with h the altitude (half the return arc).
    """
    h = 0.5 * return_arc_length(a, b, c)
    if b > 0.0:
        s_ab = seam_length(a, b, c)
        val = math.sinh(b) * math.cosh(s_ab) / math.sinh(h)
    else:
        # cusp on the b side: sinh(b) cosh(s_ab) -> cosh(a)/sinh(a) * ... ;
        # limit of sinh(b)*cosh(seam(a,b,c)) as b -> 0 is
        # (cosh a cosh b + cosh c)/sinh a -> (cosh a + cosh c)/sinh a.
        val = (math.cosh(a) + math.cosh(c)) / (math.sinh(a) * math.sinh(h))
    return math.acosh(max(val, 1.0))


# ---------------------------------------------------------------------------
# annulus and cylinder models
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class AnnulusModel:
    """Round annulus {r < |z| < 1} or Euclidean cylinder (height, circumference).

    kind is "round" (field r) or "cylinder" (fields height, circumference).
    """

    kind: str
    r: float = 0.0
    height: float = 0.0
    circumference: float = 0.0

    def __post_init__(self):
        if self.kind == "round":
            if not 0.0 < self.r < 1.0:
                raise ValueError(f"round annulus needs inner radius in (0,1), got {self.r}")
        elif self.kind == "cylinder":
            if self.height <= 0.0 or self.circumference <= 0.0:
                raise ValueError("cylinder needs positive height and circumference")
        else:
            raise ValueError(f"unknown annulus kind {self.kind!r}")

    @staticmethod
    def round(r: float) -> "AnnulusModel":
        return AnnulusModel("round", r=r)

    @staticmethod
    def cylinder(height: float, circumference: float) -> "AnnulusModel":
        return AnnulusModel("cylinder", height=height, circumference=circumference)

    def modulus(self) -> float:
        if self.kind == "round":
            return math.log(1.0 / self.r) / (2.0 * math.pi)
        return self.height / self.circumference


def annulus_core_length(a: AnnulusModel) -> float:
    """Hyperbolic length of the core geodesic, pi / modulus."""
    return math.pi / a.modulus()


# ---------------------------------------------------------------------------
# boundary projections and axis geometry
# ---------------------------------------------------------------------------


def boundary_projection(axis_p: float, axis_q: float, xi: float) -> float:
    """Signed position of the orthogonal projection of the ideal point xi
    onto the oriented geodesic (axis_p -> axis_q).

    Zero sits at the summit of the semicircle (height 1 point on vertical
    lines); positive direction toward axis_q.
    """
    if axis_p == axis_q:
        raise ValueError("degenerate axis")
    if xi == axis_p or xi == axis_q:
        raise ProjectionUndefinedError("projection undefined")
    if math.isinf(axis_q):
        if math.isinf(xi):
            raise ProjectionUndefinedError("projection undefined")
        return math.log(abs(xi - axis_p))
    if math.isinf(axis_p):
        if math.isinf(xi):
            raise ProjectionUndefinedError("projection undefined")
        return -math.log(abs(axis_q - xi))
    if math.isinf(xi):
        return 0.0
    return math.log(abs(xi - axis_p)) - math.log(abs(axis_q - xi))


def frame_from_axis(u: float, v: float, w: complex) -> Mat2:
    """Unit-determinant matrix sending (0, inf, i) to (u, v, w).

    w must lie on the geodesic with ideal endpoints u, v; used to normalize
    arbitrary oriented geodesics with a marked point to the standard frame.
    """
    if math.isinf(v):
        # vertical line through u, w = u + i*h
        h = w.imag
        m = Mat2(h, u, 0.0, 1.0)
    elif math.isinf(u):
        h = w.imag
        m = Mat2(v / h, -1.0, 1.0 / h, 0.0)
    else:
        x = w.real
        denom = v - x
        if denom == 0.0 or (x - u) * denom <= 0.0:
            raise ValueError("marked point not interior to the axis")
        k = math.sqrt((x - u) / denom)
        if u < v:
            m = Mat2(v * k, u, k, 1.0)
        else:
            m = Mat2(v * k, -u, k, -1.0)
    return m.normalized()


def reflection(g: Mat2) -> Mat2:
    """Determinant -1 matrix of the reflection across the geodesic g(0, inf).

    Apply with `apply_reflection`; the matrix acts on the conjugate.
    """
    mirror = Mat2(-1.0, 0.0, 0.0, 1.0)  # z -> -conj(z), reflection in (0, inf)
    return g @ mirror @ g.inv()


def apply_reflection_ideal(r: Mat2, x: float) -> float:
    """Image of a boundary point under a reflection matrix (conjugation is
    trivial on the real line)."""
    return r.apply_ideal(x)


def apply_reflection(r: Mat2, z: complex) -> complex:
    return r.apply(z.conjugate())


def perpendicular_foot_height(u: float, v: float) -> float:
    """Height on the axis (0, inf) of the common perpendicular to the
    geodesic (u, v), which must not separate 0 from inf (u*v > 0)."""
    prod = u * v
    if prod <= 0.0:
        raise ValueError("geodesics cross; no common perpendicular")
    return math.sqrt(prod)


def axis_gap(u: float, v: float) -> float:
    """Distance from the axis (0, inf) to the disjoint geodesic (u, v)."""
    if math.isinf(u) or math.isinf(v):
        raise ValueError("geodesics share an endpoint at infinity")
    prod = u * v
    if prod <= 0.0:
        raise ValueError("geodesics cross or touch; gap undefined")
    return math.asinh(2.0 * math.sqrt(prod) / abs(v - u))


def half_plane_distance(z: complex, w: complex) -> float:
    """Half the usual hyperbolic distance between upper half-plane points."""
    return 0.5 * point_distance(z, w)


def half_plane_distance_interval(x1: CertifiedInterval, y1: CertifiedInterval,
                                 x2: CertifiedInterval, y2: CertifiedInterval
                                 ) -> CertifiedInterval:
    """Interval version of half_plane_distance for box-valued points."""
    dx2 = (x1 - x2) * (x1 - x2)
    dx2 = CertifiedInterval(max(dx2.lo, 0.0), dx2.hi)
    dy2 = (y1 - y2) * (y1 - y2)
    dy2 = CertifiedInterval(max(dy2.lo, 0.0), dy2.hi)
    arg = 1.0 + (dx2 + dy2) / (2.0 * y1 * y2)
    return 0.5 * arg.acosh()
