"""Seeded random rationals and polynomials for identity sweeps."""

from __future__ import annotations

import random
from fractions import Fraction

from .exactpoly import Polynomial


def random_rational(rng: random.Random, bound: int = 10, max_den: int = 12) -> Fraction:
    """A rational in [-bound, bound] with denominator at most ``max_den``."""
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(-bound * den, bound * den), den)


def random_q(rng: random.Random, *, allow_zero: bool = True, unit_modulus: bool = True) -> Fraction:
    """Random rational q != 1; optionally excluding 0 and |q| = 1."""
    while True:
        q = random_rational(rng, bound=3, max_den=9)
        if q == 1 or (q == 0 and not allow_zero) or (abs(q) == 1 and not unit_modulus):
            continue
        return q


def random_nonzero(rng: random.Random, bound: int = 3, max_den: int = 9) -> Fraction:
    while True:
        x = random_rational(rng, bound, max_den)
        if x:
            return x


def random_polynomial(rng: random.Random, max_degree: int = 8, bound: int = 10) -> Polynomial:
    """Degree <= max_degree, coefficients rational in [-bound, bound]."""
    degree = rng.randint(0, max_degree)
    coeffs = [random_rational(rng, bound) for _ in range(degree + 1)]
    if coeffs[-1] == 0:
        coeffs[-1] = Fraction(1)
    return Polynomial(tuple(coeffs))
