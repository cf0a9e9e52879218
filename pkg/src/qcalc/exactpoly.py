"""Exact q-derivative calculus on rational polynomials.

Everything here runs on ``Fraction`` coefficients and exact rational q, so
each identity of the q-derivative theory can be checked with zero tolerance.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction

from .qsymbols import closed_form_weights, q_integer, theorem_constant
from .scalar import DomainError, as_scalar, kind_of, require_q_not_one


@dataclass(frozen=True)
class Polynomial:
    """c_0 + c_1 x + ... + c_d x^d over the rationals; zero is ``()``."""

    coeffs: tuple = ()

    def __post_init__(self):
        cs = [Fraction(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def monomial(cls, m: int, c=1) -> "Polynomial":
        return cls((0,) * m + (c,))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, m: int) -> Fraction:
        return self.coeffs[m] if 0 <= m < len(self.coeffs) else Fraction(0)

    def derivative_at_zero(self, m: int) -> Fraction:
        """p^(m)(0) = m! c_m."""
        return self.coeff(m) * math.factorial(m)

    @cached_property
    def _integer_form(self) -> tuple[tuple[int, ...], int]:
        """Integer numerators over the common denominator D."""
        den = math.lcm(*(c.denominator for c in self.coeffs)) if self.coeffs else 1
        return tuple(c.numerator * (den // c.denominator) for c in self.coeffs), den

    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            # homogeneous Horner in integers: one normalisation instead of 2d
            nums, den = self._integer_form
            if not nums:
                return Fraction(0)
            a, b = x.numerator, x.denominator
            acc, bpow = nums[-1], 1
            for c in reversed(nums[:-1]):
                bpow *= b
                acc = acc * a + c * bpow
            return Fraction(acc, den * bpow)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(tuple(self.coeff(i) + other.coeff(i) for i in range(n)))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(tuple(c * a for a in self.coeffs))

    def __str__(self) -> str:
        return format_poly(self)


_TERM = re.compile(
    r"""(?P<sign>[+-]?)
        (?:
          (?P<coef>\d+(?:\.\d+)?(?:/\d+)?)(?:\*(?P<x1>x)(?:\^(?P<p1>\d+))?)?
          |
          (?P<x2>x)(?:\^(?P<p2>\d+))?
        )""",
    re.VERBOSE,
)


MAX_DEGREE = 10000


def parse_poly(text: str) -> Polynomial:
    """Parse the compact term format, e.g. ``1/2*x^3-2*x+5``."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    coeffs: dict[int, Fraction] = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos or (pos > 0 and not m.group("sign")):
            raise ValueError(f"bad polynomial term at position {pos} in {text!r}")
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("coef") is not None:
            try:
                c = Fraction(m.group("coef"))
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"bad coefficient {m.group('coef')!r} at position {pos} in {text!r}") from None
            power = (int(m.group("p1")) if m.group("p1") else 1) if m.group("x1") else 0
        else:
            c = Fraction(1)
            power = int(m.group("p2")) if m.group("p2") else 1
        if power > MAX_DEGREE:
            raise ValueError(f"degree {power} exceeds {MAX_DEGREE} at position {pos} in {text!r}")
        coeffs[power] = coeffs.get(power, Fraction(0)) + sign * c
        pos = m.end()
    deg = max(coeffs)
    return Polynomial(tuple(coeffs.get(i, 0) for i in range(deg + 1)))


def format_poly(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for m in range(p.degree, -1, -1):
        c = p.coeffs[m]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if m == 0:
            body = str(mag)
        else:
            xpart = "x" if m == 1 else f"x^{m}"
            body = xpart if mag == 1 else f"{mag}*{xpart}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += sign + body
    return out


def _exact_q(q) -> Fraction:
    if kind_of(q) != "exact":
        raise TypeError("exact polynomial calculus needs a rational q")
    q = as_scalar(q)
    require_q_not_one(q)
    return q


def poly_qderiv(p: Polynomial, q) -> Polynomial:
    """D_q p: x^m -> [m]_q x^(m-1); the constant term is p'(0)."""
    q = _exact_q(q)
    return Polynomial(tuple(q_integer(m, q) * p.coeffs[m] for m in range(1, len(p.coeffs))))


def poly_qderiv_n(p: Polynomial, q, n: int) -> Polynomial:
    if n < 1:
        raise ValueError("n must be a positive integer")
    q = _exact_q(q)
    for _ in range(n):
        p = poly_qderiv(p, q)
    return p


def poly_closed_form(p: Polynomial, q, n: int, x) -> Fraction:
    """(1-q)^-n x^-n sum_k (-1)^k q^(-k(n-1)+C(k,2)) [n k]_q p(q^k x).

    q = 0 is refused: the sum needs negative powers of q.
    """
    q = _exact_q(q)
    if q == 0:
        raise DomainError("closed form needs q != 0; use qzero_nth for q = 0")
    x = as_scalar(x)
    if x == 0:
        raise DomainError("closed form needs x != 0")
    total = sum(w * p(q**k * x) for k, w in enumerate(closed_form_weights(q, n)))
    return total / ((1 - q) ** n * x**n)


def qzero_nth(p: Polynomial, n: int, x) -> Fraction:
    """x^-n (p(x) - sum_{k<n} p^(k)(0)/k! x^k), the n-th iterate at q = 0."""
    x = as_scalar(x)
    if x == 0:
        raise DomainError("qzero_nth needs x != 0; use poly_theorem_value(p, 0, n)")
    head = Polynomial(p.coeffs[:n])
    return (p(x) - head(x)) / x**n


def poly_theorem_value(p: Polynomial, q, n: int) -> Fraction:
    """c_n(q) p^(n)(0), the predicted value of (D_q^n p)(0)."""
    q = _exact_q(q)
    return theorem_constant(n, q) * p.derivative_at_zero(n)
