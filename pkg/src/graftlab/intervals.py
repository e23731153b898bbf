"""Outward-rounded interval arithmetic.

Every arithmetic operation first evaluates its endpoint candidates in double
precision and then steps the lower endpoint down and the upper endpoint up by
`_SLOP` representable values.  One step absorbs the rounding error of the
float operation itself; the second covers libm functions (exp, log, ...)
that are faithful but not guaranteed correctly rounded.  The result is an
interval certified to contain the exact real value whenever the inputs do.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_SLOP = 2
_INF = math.inf


def _down(x: float) -> float:
    if x == -_INF:
        return x
    for _ in range(_SLOP):
        x = math.nextafter(x, -_INF)
    return x


def _up(x: float) -> float:
    if x == _INF:
        return x
    for _ in range(_SLOP):
        x = math.nextafter(x, _INF)
    return x


@dataclass(frozen=True, slots=True)
class CertifiedInterval:
    """Closed interval [lo, hi] with lo <= hi.

    Construction does not widen; operations do.  Use `point` for degenerate
    intervals and `hull` to combine several.
    """

    lo: float
    hi: float

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("interval endpoint is NaN")
        if self.lo > self.hi:
            raise ValueError(f"interval endpoints out of order: [{self.lo}, {self.hi}]")

    @staticmethod
    def point(x: float) -> "CertifiedInterval":
        return CertifiedInterval(x, x)

    @staticmethod
    def hull(items) -> "CertifiedInterval":
        items = [it if isinstance(it, CertifiedInterval) else CertifiedInterval.point(it)
                 for it in items]
        if not items:
            raise ValueError("hull of nothing")
        return CertifiedInterval(min(i.lo for i in items), max(i.hi for i in items))

    # -- queries ----------------------------------------------------------

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def encloses(self, other: "CertifiedInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __repr__(self):
        return f"[{self.lo!r}, {self.hi!r}]"

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "CertifiedInterval":
        if isinstance(x, CertifiedInterval):
            return x
        return CertifiedInterval(float(x), float(x))

    def __add__(self, other):
        o = self._coerce(other)
        return CertifiedInterval(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __neg__(self):
        return CertifiedInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        cands = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return CertifiedInterval(_down(min(cands)), _up(max(cands)))

    __rmul__ = __mul__

    def recip(self) -> "CertifiedInterval":
        if self.lo <= 0.0 <= self.hi:
            raise ZeroDivisionError(f"interval {self} straddles zero")
        return CertifiedInterval(_down(1.0 / self.hi), _up(1.0 / self.lo))

    def __truediv__(self, other):
        return self * self._coerce(other).recip()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.recip()

    def abs(self) -> "CertifiedInterval":
        if self.lo >= 0.0:
            return self
        if self.hi <= 0.0:
            return -self
        return CertifiedInterval(0.0, max(-self.lo, self.hi))

    def clamp_nonnegative(self) -> "CertifiedInterval":
        """Intersect with [0, inf); valid when the true value is known >= 0."""
        if self.hi < 0.0:
            raise ValueError(f"interval {self} is entirely negative")
        return CertifiedInterval(max(self.lo, 0.0), self.hi)

    # -- monotone elementary functions --------------------------------------

    def _mono(self, f, domain_lo=None) -> "CertifiedInterval":
        lo, hi = self.lo, self.hi
        if domain_lo is not None:
            if hi < domain_lo:
                raise ValueError(f"interval {self} outside function domain")
            lo = max(lo, domain_lo)
        return CertifiedInterval(_down(f(lo)), _up(f(hi)))

    def exp(self):
        return self._mono(math.exp)

    def log(self):
        if self.lo <= 0.0:
            raise ValueError(f"log of interval {self} touching zero")
        return self._mono(math.log)

    def sqrt(self):
        return self._mono(math.sqrt, domain_lo=0.0)

    def sinh(self):
        return self._mono(math.sinh)

    def cosh(self):
        if self.lo >= 0.0:
            return self._mono(math.cosh)
        if self.hi <= 0.0:
            return (-self)._mono(math.cosh)
        top = max(math.cosh(self.lo), math.cosh(self.hi))
        return CertifiedInterval(1.0, _up(top))

    def acosh(self):
        # Outward rounding upstream may push lo slightly under 1; clipping the
        # evaluation point to the domain only lowers the endpoint, so the
        # result still contains the true value.
        return self._mono(math.acosh, domain_lo=1.0)

    def asinh(self):
        return self._mono(math.asinh)


def imax(*items) -> CertifiedInterval:
    """Interval extension of max()."""
    items = [CertifiedInterval._coerce(i) for i in items]
    return CertifiedInterval(max(i.lo for i in items), max(i.hi for i in items))


def imin(*items) -> CertifiedInterval:
    """Interval extension of min()."""
    items = [CertifiedInterval._coerce(i) for i in items]
    return CertifiedInterval(min(i.lo for i in items), min(i.hi for i in items))
