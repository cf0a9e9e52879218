"""D_q^n acting on truncated power series at 0."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .jets import TaylorJet
from .qsymbols import q_integer
from .scalar import as_scalar, magnitude, one_like, require_q_not_one


@dataclass(frozen=True)
class PowerSeries:
    jet: TaylorJet
    radius: float = math.inf

    def __post_init__(self):
        if self.jet.center != 0:
            raise ValueError("power series must be centered at 0")
        if not self.radius > 0:
            raise ValueError("domain radius must be positive")

    @property
    def coeffs(self) -> tuple:
        return self.jet.coeffs

    @property
    def order(self) -> int:
        return self.jet.order

    def __call__(self, z):
        return self.jet.evaluate(z)


def series_domain_radius(radius: float, q, n: int) -> float:
    """min(rho, rho/|q|^n), or rho itself when q = 0."""
    if not radius > 0:
        raise ValueError("domain radius must be positive")
    if q == 0 or math.isinf(radius):
        return radius
    return min(radius, radius / magnitude(q) ** n)


def series_qderiv_n(s: PowerSeries, q, n: int) -> PowerSeries:
    """b_j = a_(j+n) (q^(j+1); q)_n / (1-q)^n, truncated to order N - n.

    The Pochhammer ratio is evaluated as the product [j+1]_q ... [j+n]_q.
    """
    q = as_scalar(q)
    require_q_not_one(q)
    if n < 1:
        raise ValueError("n must be a positive integer")
    if n > s.order:
        raise ValueError(f"n = {n} exceeds series order {s.order}")
    a = s.coeffs
    out = []
    for j in range(s.order - n + 1):
        factor = one_like(q)
        for i in range(j + 1, j + n + 1):
            factor *= q_integer(i, q)
        out.append(a[j + n] * factor)
    jet = TaylorJet(s.jet.center, tuple(out))
    return PowerSeries(jet, series_domain_radius(s.radius, q, n))
