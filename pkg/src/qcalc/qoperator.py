"""The q-derivative on black-box functions and the numeric limit check.

``qderiv_n_value`` dispatches on the evaluation point and on q:

* x != 0, q != 0: the k-sum over f(q^k x) with q-binomial weights,
* x != 0, q == 0: x^-n times the Taylor remainder of order n,
* x == 0: the constant coefficient of D_q^n applied to the jet at 0.

``qlimit_estimate`` samples the first two branches on a geometric grid
shrinking to 0 and extrapolates; ``theorem_verify`` compares that limit
with c_n(q) f^(n)(0).
"""

from __future__ import annotations

import cmath
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .jets import TaylorJet, jet_derivative
from .qseries import PowerSeries, series_qderiv_n
from .qsymbols import closed_form_weights, theorem_constant
from .scalar import DomainError, Scalar, as_scalar, magnitude, require_q_not_one, zero_like

JetOracle = Callable[[Scalar, int], TaylorJet]

DEFAULT_LEVELS = 2


@dataclass(frozen=True)
class PointFn:
    """A function handle defined on the disc |x| < domain_radius."""

    evaluator: Callable[[Scalar], Scalar]
    domain_radius: float = math.inf
    jet_oracle: Optional[JetOracle] = None
    name: str = "f"

    def __post_init__(self):
        if not self.domain_radius > 0:
            raise ValueError("domain radius must be positive")

    def __call__(self, x):
        if not magnitude(x) < self.domain_radius:
            raise DomainError(f"{self.name}: |{x}| is outside the domain radius {self.domain_radius}")
        return self.evaluator(x)

    def jet(self, order: int, center=0) -> TaylorJet:
        if self.jet_oracle is None:
            raise DomainError(f"{self.name}: derivative oracle required")
        return self.jet_oracle(as_scalar(center), order)

    @classmethod
    def from_polynomial(cls, p, name: str = "p") -> "PointFn":
        from .jets import jet_seed

        def oracle(center, order):
            t = jet_seed("variable", None, center, order)
            acc = jet_seed("constant", 0, center, order)
            for c in reversed(p.coeffs):
                acc = acc * t + c
            return acc

        return cls(p, math.inf, oracle, name)


@dataclass(frozen=True)
class LimitReport:
    estimate: Scalar
    uncertainty: float
    samples: tuple
    converged: bool
    extrapolants: tuple = field(default=(), repr=False)


@dataclass(frozen=True)
class VerifyReport:
    q: Scalar
    n: int
    limit: LimitReport
    predicted: Scalar
    abs_err: float
    rel_err: float
    tolerance: float
    passed: bool


def acceptance_tolerance(n: int) -> float:
    """Relative tolerance for the binary64 limit check at order n.

    The cancellation floor of the k-sum rises with n, hence the ladder.
    """
    if n <= 2:
        return 1e-6
    if n <= 4:
        return 1e-4
    return 1e-3


def qderiv_value(f: PointFn, q, x) -> Scalar:
    """(D_q f)(x); at x = 0 this is f'(0) from the jet oracle."""
    q, x = as_scalar(q), as_scalar(x)
    require_q_not_one(q)
    if x == 0:
        return jet_derivative(f.jet(1), 1)
    return (f(x) - f(q * x)) / ((1 - q) * x)


_EPS = sys.float_info.epsilon


def _rounding_bound(terms) -> float:
    """eps * sum |term| for floating terms; 0 when every term is exact."""
    if all(isinstance(t, Fraction) for t in terms):
        return 0.0
    return _EPS * sum(magnitude(t) for t in terms)


def _closed_form(f: PointFn, q, n: int, x):
    # Weights are merged per distinct abscissa before f is touched, so at
    # q = -1 the coincident points cancel exactly instead of to rounding.
    weights = closed_form_weights(q, n)
    merged: dict = {}
    qk = q**0
    for w in weights:
        point = qk * x
        merged[point] = merged.get(point, 0) + w
        qk = qk * q
    for point in merged:
        if not magnitude(point) < f.domain_radius:
            raise DomainError(f"{f.name}: sample point {point} outside domain radius {f.domain_radius}")
    values = [(w, f(point)) for point, w in merged.items() if w != 0]
    denom = (1 - q) ** n * x**n
    if values and all(v == values[0][1] for _, v in values):
        # the weights sum to (q^(1-n); q)_n = 0, so equal values cancel exactly
        return zero_like(values[0][1], x) / denom, 0.0
    terms = [w * v for w, v in values]
    total = sum(terms, zero_like(x))
    return total / denom, _rounding_bound(terms) / magnitude(denom)


def _qzero_remainder(f: PointFn, n: int, x):
    head = f.jet(n - 1)
    fx = f(x)
    if fx == head.coeffs[0] and not any(head.coeffs[1:]):
        return zero_like(fx, x) / x**n, 0.0
    terms = [fx] + [a * x**k for k, a in enumerate(head.coeffs)]
    denom = x**n
    return (fx - head.evaluate(x)) / denom, _rounding_bound(terms) / magnitude(denom)


def _qderiv_n_with_noise(f: PointFn, q, n: int, x):
    q, x = as_scalar(q), as_scalar(x)
    require_q_not_one(q)
    if n < 1:
        raise ValueError("n must be a positive integer")
    if x == 0:
        s = PowerSeries(f.jet(n), f.domain_radius)
        return series_qderiv_n(s, q, n).coeffs[0], 0.0
    if q == 0:
        return _qzero_remainder(f, n, x)
    return _closed_form(f, q, n, x)


def qderiv_n_value(f: PointFn, q, n: int, x) -> Scalar:
    """(D_q^n f)(x) for n >= 1."""
    return _qderiv_n_with_noise(f, q, n, x)[0]


def default_start(radius: float, q, n: int):
    """min(rho, 1)/4, pulled in by |q|^n when |q| > 1.

    The start is an exact rational whenever q is, so that exact functions
    (polynomials) produce exact samples.
    """
    x0 = (Fraction(1) if radius >= 1 else Fraction(radius)) / 4
    qa = abs(q) if isinstance(q, Fraction) else magnitude(q)
    if qa > 1:
        x0 /= qa**n
    return x0


def _finite(v) -> bool:
    return cmath.isfinite(v) if isinstance(v, complex) else math.isfinite(v)


def qlimit_estimate(
    f: PointFn,
    q,
    n: int,
    *,
    x0: float | None = None,
    ratio=Fraction(1, 2),
    max_steps: int = 40,
    tol: float = 1e-13,
    levels: int = DEFAULT_LEVELS,
) -> LimitReport:
    """Estimate lim_{x->0} D_q^n f(x) from x_j = x0 ratio^j.

    Samples feed a Richardson tableau; level l removes the x^l error term.
    Every entry carries a rounding bound propagated from the samples, and
    its uncertainty is the larger of that bound and the change from the
    previous row at the same level.  Iteration stops once the best
    uncertainty is within ``tol * (1 + |estimate|)``, or once rounding has
    grown far past the best uncertainty seen, so near the cancellation
    floor the best achievable estimate is returned instead of looping.
    """
    q = as_scalar(q)
    require_q_not_one(q)
    if not 0 < ratio < 1:
        raise ValueError("ratio must lie in (0, 1)")
    if levels < 1:
        raise ValueError("levels must be at least 1")
    if x0 is None:
        x0 = default_start(f.domain_radius, q, n)
    samples = []
    rows = []  # rows[j][l] = (value, rounding bound)
    best = None  # (uncertainty, estimate)
    converged = False
    for j in range(max_steps):
        x = x0 * ratio**j
        v, noise = _qderiv_n_with_noise(f, q, n, x)
        if not _finite(v):
            break
        samples.append((x, v))
        row = [(v, noise)]
        for l in range(1, min(levels, j) + 1):
            hi, hi_noise = row[l - 1]
            lo, lo_noise = rows[j - 1][l - 1]
            r = ratio**l
            row.append(((hi - r * lo) / (1 - r), (hi_noise + r * lo_noise) / (1 - r)))
        rows.append(row)
        floor = None
        for l in range(1, len(row)):
            if l >= len(rows[j - 1]):
                continue
            est, noise_l = row[l]
            unc = max(magnitude(est - rows[j - 1][l][0]), noise_l)
            floor = noise_l if floor is None else min(floor, noise_l)
            if best is None or unc < best[0]:
                best = (unc, est)
        if best is None:
            continue
        if best[0] <= tol * (1 + magnitude(best[1])):
            converged = True
            break
        if floor is not None and floor > 1e3 * best[0]:
            break
    extrap = tuple(row[1][0] for row in rows if len(row) > 1)
    if best is None:
        est = extrap[-1] if extrap else (samples[-1][1] if samples else math.nan)
        return LimitReport(est, math.inf, tuple(samples), False, extrap)
    unc, est = best
    return LimitReport(est, unc, tuple(samples), converged, extrap)


def theorem_verify(f: PointFn, q, n: int, *, rel_tol: float | None = None, **opts) -> VerifyReport:
    """Numeric limit of D_q^n f at 0 against c_n(q) f^(n)(0).

    Relative error falls back to absolute error when the prediction is 0.
    """
    q = as_scalar(q)
    require_q_not_one(q)
    predicted = theorem_constant(n, q) * jet_derivative(f.jet(n), n)
    report = qlimit_estimate(f, q, n, **opts)
    abs_err = magnitude(report.estimate - predicted)
    scale = magnitude(predicted)
    rel_err = abs_err / scale if scale else abs_err
    if rel_tol is None:
        rel_tol = acceptance_tolerance(n)
    return VerifyReport(q, n, report, predicted, abs_err, rel_err, rel_tol, rel_err <= rel_tol)


@dataclass(frozen=True)
class BenchRow:
    x: float
    value: Scalar
    reference: Scalar
    abs_err: float
    rel_err: float


def cancellation_profile(f: PointFn, q, n: int, xs, *, series_order: int | None = None) -> list[BenchRow]:
    """Closed-form D_q^n f(x) against the power-series value, per x.

    The reference sums the jet series of D_q^n f at 0 (order ``n + 40`` by
    default), which involves no subtractive cancellation.
    """
    q = as_scalar(q)
    require_q_not_one(q)
    order = n + 40 if series_order is None else series_order
    series = series_qderiv_n(PowerSeries(f.jet(order), f.domain_radius), q, n)
    rows = []
    for x in xs:
        value = qderiv_n_value(f, q, n, x)
        ref = series(x)
        err = magnitude(value - ref)
        scale = magnitude(ref)
        rows.append(BenchRow(x, value, ref, err, err / scale if scale else err))
    return rows
