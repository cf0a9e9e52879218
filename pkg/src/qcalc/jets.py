"""Truncated Taylor series ("jets") at a fixed center.

A jet of order N stores a_0..a_N with a_m = f^(m)(c) / m!.  Arithmetic is
exact when every coefficient is a Fraction; the elementary functions keep
exact coefficients only when the constant term hits a rational special
value (exp 0, log 1, sin 0, cos 0).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .scalar import COMPLEX, DomainError, Scalar, as_scalar, common_kind, kind_of, zero_like


@dataclass(frozen=True)
class TaylorJet:
    center: Scalar
    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a jet needs at least one coefficient")
        object.__setattr__(self, "center", as_scalar(self.center))
        object.__setattr__(self, "coeffs", tuple(as_scalar(c) for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def kind(self) -> str:
        return common_kind(*self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, m):
        return self.coeffs[m]

    def _coerce(self, other) -> "TaylorJet":
        if isinstance(other, TaylorJet):
            return other
        return jet_seed("constant", other, self.center, self.order)

    def __add__(self, other):
        return jet_arith("add", self, self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return jet_arith("sub", self, self._coerce(other))

    def __rsub__(self, other):
        return jet_arith("sub", self._coerce(other), self)

    def __mul__(self, other):
        if not isinstance(other, TaylorJet):
            c = as_scalar(other)
            return TaylorJet(self.center, tuple(a * c for a in self.coeffs))
        return jet_arith("mul", self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return jet_arith("div", self, self._coerce(other))

    def __rtruediv__(self, other):
        return jet_arith("div", self._coerce(other), self)

    def __neg__(self):
        return TaylorJet(self.center, tuple(-a for a in self.coeffs))

    def __pow__(self, p: int):
        return jet_apply("int_pow", self, p)

    def evaluate(self, t) -> Scalar:
        """Value of the truncated polynomial at offset ``t`` from the center."""
        acc = zero_like(*self.coeffs, as_scalar(t))
        for a in reversed(self.coeffs):
            acc = acc * t + a
        return acc


def jet_seed(kind: str, value, center, order: int) -> TaylorJet:
    """Constant jet [value, 0, ...] or the variable jet [center, 1, 0, ...]."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    center = as_scalar(center)
    zero = zero_like(center)
    if kind == "constant":
        return TaylorJet(center, (as_scalar(value),) + (zero,) * order)
    if kind == "variable":
        tail = (zero + 1,) + (zero,) * (order - 1) if order else ()
        return TaylorJet(center, (center,) + tail)
    raise ValueError(f"unknown seed kind {kind!r}")


def _check_compatible(u: TaylorJet, v: TaylorJet) -> None:
    if u.order != v.order:
        raise ValueError(f"jet orders differ: {u.order} != {v.order}")
    if u.center != v.center:
        raise ValueError(f"jet centers differ: {u.center} != {v.center}")


def _mul(a, b, n):
    return tuple(sum((a[j] * b[k - j] for j in range(k + 1)), zero_like(a[0], b[0])) for k in range(n + 1))


def _div(a, b, n):
    if b[0] == 0:
        raise DomainError("division by a jet with zero constant term")
    out = []
    for k in range(n + 1):
        s = a[k]
        for j in range(1, k + 1):
            s -= b[j] * out[k - j]
        out.append(s / b[0])
    return tuple(out)


def jet_arith(op: str, u: TaylorJet, v: TaylorJet) -> TaylorJet:
    _check_compatible(u, v)
    a, b, n = u.coeffs, v.coeffs, u.order
    if op == "add":
        c = tuple(x + y for x, y in zip(a, b))
    elif op == "sub":
        c = tuple(x - y for x, y in zip(a, b))
    elif op == "mul":
        c = _mul(a, b, n)
    elif op == "div":
        c = _div(a, b, n)
    else:
        raise ValueError(f"unknown jet operation {op!r}")
    return TaylorJet(u.center, c)


def _is_exact(x) -> bool:
    return isinstance(x, Fraction)


def _exp(a):
    a0 = a[0]
    if _is_exact(a0) and a0 == 0:
        e0 = Fraction(1)
    elif kind_of(a0) == COMPLEX:
        e0 = cmath.exp(a0)
    else:
        e0 = math.exp(a0)
    e = [e0]
    for k in range(1, len(a)):
        e.append(sum(j * a[j] * e[k - j] for j in range(1, k + 1)) / k)
    return e


def _log(a):
    a0 = a[0]
    if kind_of(a0) == COMPLEX:
        if a0.real <= 0:
            raise DomainError(f"log needs a constant term with positive real part, got {a0}")
        l0 = cmath.log(a0)
    elif a0 <= 0:
        raise DomainError(f"log needs a positive constant term, got {a0}")
    elif _is_exact(a0) and a0 == 1:
        l0 = Fraction(0)
    else:
        l0 = math.log(a0)
    out = [l0]
    for k in range(1, len(a)):
        s = a[k] - sum((j * out[j] * a[k - j] for j in range(1, k)), zero_like(a0)) / k
        out.append(s / a0)
    return out


def _sincos(a):
    a0 = a[0]
    if _is_exact(a0) and a0 == 0:
        s0, c0 = Fraction(0), Fraction(1)
    elif kind_of(a0) == COMPLEX:
        s0, c0 = cmath.sin(a0), cmath.cos(a0)
    else:
        s0, c0 = math.sin(a0), math.cos(a0)
    s, c = [s0], [c0]
    for k in range(1, len(a)):
        s.append(sum(j * a[j] * c[k - j] for j in range(1, k + 1)) / k)
        c.append(-sum(j * a[j] * s[k - j] for j in range(1, k + 1)) / k)
    return s, c


def _int_pow(u: TaylorJet, p: int) -> TaylorJet:
    if p < 0:
        if u.coeffs[0] == 0:
            raise DomainError("negative power of a jet with zero constant term")
        return jet_arith("div", jet_seed("constant", 1, u.center, u.order), _int_pow(u, -p))
    result = jet_seed("constant", 1, u.center, u.order)
    base = u
    while p:
        if p & 1:
            result = jet_arith("mul", result, base)
        p >>= 1
        if p:
            base = jet_arith("mul", base, base)
    return result


def jet_apply(fn: str, u: TaylorJet, p: int | None = None) -> TaylorJet:
    """Apply exp, log, sin, cos or an integer power to a jet."""
    a = u.coeffs
    if fn == "int_pow":
        if p is None:
            raise ValueError("int_pow needs an exponent")
        return _int_pow(u, int(p))
    if fn not in ("exp", "log", "sin", "cos"):
        raise ValueError(f"unknown jet function {fn!r}")
    try:
        if fn == "exp":
            c = _exp(a)
        elif fn == "log":
            c = _log(a)
        else:
            c = _sincos(a)[fn == "cos"]
    except OverflowError:
        raise DomainError(f"{fn} overflows at {a[0]}") from None
    except ValueError as err:
        if isinstance(err, DomainError):
            raise
        # math.sin(inf) and friends
        raise DomainError(f"{fn} undefined at {a[0]}") from None
    return TaylorJet(u.center, tuple(c))


def jet_derivative(u: TaylorJet, m: int) -> Scalar:
    """f^(m)(center) = m! a_m."""
    if m < 0 or m > u.order:
        raise ValueError(f"derivative order {m} outside 0..{u.order}")
    return u.coeffs[m] * math.factorial(m)
