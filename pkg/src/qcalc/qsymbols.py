"""q-Pochhammer symbols, Gaussian binomials and the theorem constant.

All functions are kind-generic: exact ``Fraction`` inputs give exact
outputs, floats and complex values go through ordinary binary64 arithmetic.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .scalar import DomainError, Scalar, as_scalar, one_like, require_q_not_one, zero_like

IntPolynomial = tuple  # tuple[int, ...], index = power of q, trailing zeros trimmed


def _qpow(q, e: int):
    """q**e for a possibly negative integer e (one division in float paths)."""
    if e >= 0:
        return q**e
    if q == 0:
        raise DomainError(f"negative power q^{e} of q = 0")
    return 1 / q ** (-e)


def q_pochhammer(a, q, n: int) -> Scalar:
    """(a; q)_n = prod_{k=0}^{n-1} (1 - a q^k)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    a, q = as_scalar(a), as_scalar(q)
    result = one_like(a, q)
    qk = one_like(q)
    for _ in range(n):
        result *= 1 - a * qk
        qk *= q
    return result


@lru_cache(maxsize=None)
def gaussian_binomial_poly(n: int, k: int) -> IntPolynomial:
    """Integer coefficients of the Gaussian polynomial [n k] in q.

    Built with the q-Pascal rule [n k] = [n-1 k-1] + q^k [n-1 k]; the
    empty tuple is the zero polynomial (k < 0 or k > n).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if k < 0 or k > n:
        return ()
    if k == 0 or k == n:
        return (1,)
    left = gaussian_binomial_poly(n - 1, k - 1)
    right = gaussian_binomial_poly(n - 1, k)
    size = max(len(left), len(right) + k)
    coeffs = [0] * size
    for i, c in enumerate(left):
        coeffs[i] += c
    for i, c in enumerate(right):
        coeffs[i + k] += c
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _horner(coeffs, x):
    acc = zero_like(x)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def q_binomial(n: int, k: int, q) -> Scalar:
    """[n k]_q, evaluated from the Gaussian polynomial.

    Unlike the Pochhammer ratio this is well defined at q = 0 and q = -1.
    """
    return _horner(gaussian_binomial_poly(n, k), as_scalar(q))


def q_integer(m: int, q) -> Scalar:
    """[m]_q = 1 + q + ... + q^(m-1)."""
    q = as_scalar(q)
    acc = zero_like(q)
    for _ in range(m):
        acc = acc * q + 1
    return acc


def q_factorial(n: int, q) -> Scalar:
    result = one_like(as_scalar(q))
    for m in range(1, n + 1):
        result *= q_integer(m, q)
    return result


def theorem_constant(n: int, q) -> Scalar:
    """Multiplier of f^(n)(0) in (D_q^n f)(0): (q;q)_n / ((1-q)^n n!).

    Evaluated as [n]_q! / n!, which stays accurate as q approaches 1.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    require_q_not_one(q)
    return q_factorial(n, q) / math.factorial(n)


def alternating_qbinomial_sum(m: int, n: int, q) -> Scalar:
    """sum_{k=0}^{n} (-1)^k q^(k(m-n+1) + C(k,2)) [n k]_q, term by term.

    Equals (q^(m-n+1); q)_n, which is (q;q)_n for m = n and 0 for m < n.
    """
    if m < 0 or n < 1:
        raise ValueError("need m >= 0 and n >= 1")
    q = as_scalar(q)
    if q == 0 and m < n - 1:
        raise DomainError("q = 0 with m < n - 1 needs a negative power of zero")
    total = zero_like(q)
    for k in range(n + 1):
        term = _qpow(q, k * (m - n + 1) + k * (k - 1) // 2) * q_binomial(n, k, q)
        total += -term if k % 2 else term
    return total


def closed_form_weights(q, n: int) -> list:
    """Weights w_k with (1-q)^n x^n D_q^n f(x) = sum_k w_k f(q^k x).

    w_k = (-1)^k q^(-k(n-1) + C(k,2)) [n k]_q, k = 0..n; needs q != 0.
    """
    q = as_scalar(q)
    if q == 0:
        raise DomainError("closed-form weights need q != 0")
    return list(_weights(q, n))


@lru_cache(maxsize=1024, typed=True)
def _weights(q, n: int) -> tuple:
    weights = []
    for k in range(n + 1):
        w = _qpow(q, -k * (n - 1) + k * (k - 1) // 2) * q_binomial(n, k, q)
        weights.append(-w if k % 2 else w)
    return tuple(weights)
