"""Affine interval certificates with shared variables.

A certificate value is  base + sum coeff_k * x_k + sum y_i  where each x_k
ranges over a box interval shared (by key) between certificates and each y_i
is a private box variable.  Ratios of two such values over the joint box are
monotone in every coordinate, so extrema sit at corners; enumerating corners
gives sharp correlated bounds that naive interval division would lose.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .intervals import CertifiedInterval, _down, _up


@dataclass(frozen=True)
class AffineCert:
    base: float
    shared: tuple[tuple[str, float, CertifiedInterval], ...]
    own: tuple[CertifiedInterval, ...]

    def interval(self) -> CertifiedInterval:
        total = CertifiedInterval.point(self.base)
        for _, coeff, box in self.shared:
            total = total + coeff * box
        for box in self.own:
            total = total + box
        return total


def cert_ratio(num: AffineCert, den: AffineCert) -> CertifiedInterval:
    """Range of num/den over the joint variable box (correlated extension).

    Shared variables with equal keys are identified between numerator and
    denominator; the denominator must be positive over the whole box.
    """
    num_shared = dict((k, (c, b)) for k, c, b in num.shared)
    den_shared = dict((k, (c, b)) for k, c, b in den.shared)
    keys = sorted(set(num_shared) | set(den_shared))
    axes: list[tuple[float, float, float, float]] = []
    for k in keys:
        cn, bn = num_shared.get(k, (0.0, None))
        cd, bd = den_shared.get(k, (0.0, None))
        box = bn if bn is not None else bd
        if bn is not None and bd is not None and (bn.lo != bd.lo or bn.hi != bd.hi):
            raise ValueError(f"shared variable {k!r} has mismatched boxes")
        axes.append((cn, cd, box.lo, box.hi))
    for box in num.own:
        axes.append((1.0, 0.0, box.lo, box.hi))
    for box in den.own:
        axes.append((0.0, 1.0, box.lo, box.hi))
    if len(axes) > 22:
        raise ValueError(f"too many certificate variables ({len(axes)})")
    lo, hi = math.inf, -math.inf
    for corner in itertools.product((0, 1), repeat=len(axes)):
        n_val, d_val = num.base, den.base
        for pick, (cn, cd, blo, bhi) in zip(corner, axes):
            x = bhi if pick else blo
            n_val += cn * x
            d_val += cd * x
        if d_val <= 0.0:
            raise ValueError("denominator certificate is not positive")
        val = n_val / d_val
        lo, hi = min(lo, val), max(hi, val)
    return CertifiedInterval(_down(_down(lo)), _up(_up(hi)))
