"""Randomised exact identity sweeps used by ``qcalc identity``."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .exactpoly import poly_closed_form, poly_qderiv_n
from .qsymbols import alternating_qbinomial_sum, q_binomial, q_pochhammer
from .sampling import random_nonzero, random_polynomial, random_q, random_rational

KINDS = ("gauss", "sumdelta", "qminus1", "closedform")


@dataclass(frozen=True)
class Failure:
    trial: int
    detail: str


def _gauss(rng):
    a = random_rational(rng)
    q = random_q(rng, unit_modulus=False)
    n = rng.randint(0, 12)
    lhs = q_pochhammer(a, q, n)
    rhs = sum(q ** (k * (k - 1) // 2) * q_binomial(n, k, q) * (-a) ** k for k in range(n + 1))
    return lhs == rhs, f"a={a} q={q} n={n}: {lhs} != {rhs}"


def _sumdelta(rng):
    n = rng.randint(1, 10)
    m = rng.randint(0, 2 * n)
    q = random_q(rng, allow_zero=m >= n - 1)
    lhs = alternating_qbinomial_sum(m, n, q)
    rhs = q_pochhammer(q ** (m - n + 1), q, n)
    ok = lhs == rhs
    if m <= n:
        ok = ok and lhs == (q_pochhammer(q, q, n) if m == n else 0)
    return ok, f"m={m} n={n} q={q}: {lhs} vs {rhs}"


def _qminus1(rng):
    p = random_polynomial(rng)
    r = poly_qderiv_n(p, -1, 2)
    return r.is_zero(), f"p={p}: D_-1^2 p = {r}"


def _closedform(rng):
    p = random_polynomial(rng)
    q = random_q(rng, allow_zero=False)
    n = rng.randint(1, 8)
    x = random_nonzero(rng)
    lhs = poly_closed_form(p, q, n, x)
    rhs = poly_qderiv_n(p, q, n)(x)
    return lhs == rhs, f"p={p} q={q} n={n} x={x}: {lhs} != {rhs}"


_CHECKS = {"gauss": _gauss, "sumdelta": _sumdelta, "qminus1": _qminus1, "closedform": _closedform}


def run_identity(which: str, seed: int, trials: int) -> list[Failure]:
    """Run ``trials`` seeded checks of one identity; return the failures."""
    try:
        check = _CHECKS[which]
    except KeyError:
        raise ValueError(f"unknown identity {which!r}; choose from {', '.join(KINDS)}") from None
    rng = random.Random(seed)
    failures = []
    for t in range(trials):
        ok, detail = check(rng)
        if not ok:
            failures.append(Failure(t, detail))
    return failures
