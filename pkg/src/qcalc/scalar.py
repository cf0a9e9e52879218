"""Scalar kinds, parsing and text rendering.

A scalar is one of three Python types:

* ``Fraction`` (exact rational; plain ``int`` is accepted and promoted),
* ``float`` (binary64 real),
* ``complex`` (binary64 complex).

Python's own numeric tower already promotes Fraction -> float -> complex
when kinds are mixed, so all operator code is written once against the
arithmetic operators and stays kind-generic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Scalar = Union[Fraction, float, complex]

EXACT = "exact"
REAL = "real"
COMPLEX = "complex"


class QCalcError(Exception):
    """Base class for library errors."""


class DomainError(QCalcError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


def as_scalar(value) -> Scalar:
    """Normalise ints/bools to Fraction; pass other scalar kinds through."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, (float, complex)):
        return value
    raise TypeError(f"not a scalar: {value!r}")


def kind_of(value) -> str:
    if isinstance(value, (Fraction, int)):
        return EXACT
    if isinstance(value, float):
        return REAL
    if isinstance(value, complex):
        return COMPLEX
    raise TypeError(f"not a scalar: {value!r}")


def promote(value, kind: str) -> Scalar:
    """Convert ``value`` to ``kind``; demotion is refused."""
    current = kind_of(value)
    order = (EXACT, REAL, COMPLEX)
    if order.index(kind) < order.index(current):
        raise ValueError(f"cannot demote {current} scalar to {kind}")
    if kind == EXACT:
        return as_scalar(value)
    if kind == REAL:
        return float(value)
    return complex(value)


def common_kind(*values) -> str:
    kinds = {kind_of(v) for v in values}
    for k in (COMPLEX, REAL):
        if k in kinds:
            return k
    return EXACT


def one_like(*values) -> Scalar:
    """The unit of the widest kind among ``values``."""
    return promote(Fraction(1), common_kind(*values))


def zero_like(*values) -> Scalar:
    return promote(Fraction(0), common_kind(*values))


def is_one(q) -> bool:
    return q == 1


def require_q_not_one(q) -> None:
    if is_one(q):
        raise DomainError("q = 1 is excluded: (f(x) - f(qx)) / ((1 - q) x) is undefined")


def parse_scalar(text: str) -> Scalar:
    """Parse ``p/q``, a decimal, or a complex ``a+bi``.

    Rationals and decimals become exact ``Fraction`` values
    (``0.25`` -> ``1/4``); anything with a trailing ``i`` or ``j`` becomes
    complex.

    >>> parse_scalar("3/7")
    Fraction(3, 7)
    >>> parse_scalar("0.5i")
    0.5j
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    if s[-1] in "ij":
        body = s[:-1]
        if not body or body[-1] in "+-":
            body += "1"
        try:
            return complex(body + "j")
        except ValueError:
            raise ValueError(f"invalid complex scalar: {text!r}") from None
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"invalid scalar: {text!r}") from None


def format_scalar(value) -> str:
    """Render exact values as ``p/q``, floats with 17 significant digits,
    complex values as ``a+bi``."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (Fraction, int)):
        return str(Fraction(value))
    if isinstance(value, float):
        return _format_float(value)
    if isinstance(value, complex):
        re = _format_float(value.real)
        im = _format_float(value.imag)
        if not im.startswith("-"):
            im = "+" + im
        return f"{re}{im}i"
    raise TypeError(f"not a scalar: {value!r}")


def _format_float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def magnitude(value) -> float:
    return float(abs(value))
