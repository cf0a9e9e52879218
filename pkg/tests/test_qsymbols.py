import itertools
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcalc.qsymbols import (
    alternating_qbinomial_sum,
    closed_form_weights,
    gaussian_binomial_poly,
    q_binomial,
    q_integer,
    q_pochhammer,
    theorem_constant,
)
from qcalc.scalar import DomainError


def gaussian_by_subsets(n, k):
    """Oracle: [n k]_q = sum over k-subsets S of {0..n-1} of q^(sum(S) - C(k,2))."""
    if k < 0 or k > n:
        return ()
    counts = {}
    for s in itertools.combinations(range(n), k):
        e = sum(s) - k * (k - 1) // 2
        counts[e] = counts.get(e, 0) + 1
    return tuple(counts.get(i, 0) for i in range(max(counts) + 1))


def pochhammer_product(a, q, n):
    out = F(1)
    for k in range(n):
        out *= 1 - a * q**k
    return out


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=9)
q_values = rationals.filter(lambda q: q != 1)


# ---------------------------------------------------------------- examples


def test_pochhammer_examples():
    assert q_pochhammer(F(1, 2), F(1, 2), 3) == F(1, 2) * F(3, 4) * F(7, 8) == F(21, 64)
    assert q_pochhammer(F(3, 7), F(-2), 0) == 1
    assert q_pochhammer(1, F(5, 3), 4) == 0


def test_pochhammer_kinds():
    assert isinstance(q_pochhammer(F(1, 2), F(1, 3), 2), F)
    assert isinstance(q_pochhammer(0.5, F(1, 3), 2), float)
    assert isinstance(q_pochhammer(0.5, 0.5j, 0), complex)
    assert q_pochhammer(0.5, 0.5, 3) == pytest.approx(21 / 64, rel=1e-15)


def test_gaussian_poly_examples():
    assert gaussian_binomial_poly(4, 2) == (1, 1, 2, 1, 1)
    assert gaussian_binomial_poly(7, 0) == (1,)
    assert gaussian_binomial_poly(3, 5) == ()
    assert gaussian_binomial_poly(3, -1) == ()


@pytest.mark.parametrize("n", range(0, 9))
def test_gaussian_poly_matches_subset_count(n):
    for k in range(-1, n + 2):
        assert gaussian_binomial_poly(n, k) == gaussian_by_subsets(n, k)


def test_q_binomial_examples():
    assert q_binomial(4, 2, 2) == 1 + 2 + 8 + 8 + 16 == 35
    assert q_binomial(3, 1, F(1, 2)) == F(7, 4)
    for q in (F(0), F(-1), F(3, 5), 2.5):
        assert q_binomial(5, 5, q) == 1


def test_q_binomial_at_special_q():
    # q = 0: [n k]_0 = 1; q = -1 follows from the polynomial, where the ratio is 0/0
    assert all(q_binomial(6, k, 0) == 1 for k in range(7))
    assert [q_binomial(4, k, -1) for k in range(5)] == [1, 0, 2, 0, 1]


def test_theorem_constant_examples():
    assert all(theorem_constant(1, q) == 1 for q in (F(0), F(-1), F(1, 2), F(7), 0.3, 0.5j))
    assert theorem_constant(2, F(1, 2)) == (F(1, 2) * F(3, 4)) / (F(1, 4) * 2) == F(3, 4)
    assert theorem_constant(3, 0) == F(1, 6)


def test_theorem_constant_rejects_q_one():
    with pytest.raises(DomainError):
        theorem_constant(2, 1)
    with pytest.raises(DomainError):
        theorem_constant(2, 1 + 0j)


def test_theorem_constant_near_one_is_stable():
    # the telescoped form tends to 1 as q -> 1, no 0/0 blow-up
    assert theorem_constant(6, 1 - 1e-12) == pytest.approx(1.0, rel=1e-9)


def test_alternating_sum_examples():
    for q in (F(2), F(-1, 3), F(0)):
        assert alternating_qbinomial_sum(0, 1, q) == 0
        assert alternating_qbinomial_sum(1, 1, q) == 1 - q
    # direct 3-term sum at m=3, n=2, q=1/2
    q = F(1, 2)
    direct = sum((-1) ** k * q ** (k * 2 + k * (k - 1) // 2) * q_binomial(2, k, q) for k in range(3))
    assert alternating_qbinomial_sum(3, 2, q) == direct == F(3, 4) * F(7, 8) == F(21, 32)


def test_alternating_sum_rejects_negative_power_of_zero():
    with pytest.raises(DomainError):
        alternating_qbinomial_sum(0, 3, 0)
    assert alternating_qbinomial_sum(2, 3, 0) == 0  # m = n - 1 only needs q^0


def test_closed_form_weights_n2():
    q = F(2, 5)
    assert closed_form_weights(q, 2) == [1, -(1 + 1 / q), 1 / q]
    with pytest.raises(DomainError):
        closed_form_weights(0, 2)


def test_q_integer():
    assert q_integer(0, F(1, 2)) == 0
    assert q_integer(4, F(1, 2)) == F(15, 8)
    assert q_integer(3, F(-1)) == 1


# -------------------------------------------------------------- properties


@settings(max_examples=200, deadline=None)
@given(a=rationals, q=rationals.filter(lambda q: abs(q) != 1), n=st.integers(0, 12))
def test_gauss_identity(a, q, n):
    rhs = sum(q ** (k * (k - 1) // 2) * q_binomial(n, k, q) * (-a) ** k for k in range(n + 1))
    assert q_pochhammer(a, q, n) == rhs


@settings(max_examples=200, deadline=None)
@given(q=q_values, n=st.integers(1, 10), data=st.data())
def test_sumdelta_kronecker(q, n, data):
    m = data.draw(st.integers(0 if q != 0 else n - 1, n))
    expected = q_pochhammer(q, q, n) if m == n else 0
    assert alternating_qbinomial_sum(m, n, q) == expected


@settings(max_examples=200, deadline=None)
@given(q=q_values.filter(lambda q: q != 0), n=st.integers(1, 8), m=st.integers(0, 16))
def test_sumdelta_pochhammer_contract(q, n, m):
    assert alternating_qbinomial_sum(m, n, q) == q_pochhammer(q ** (m - n + 1), q, n)


@given(a=rationals, q=rationals, n=st.integers(0, 10))
def test_pochhammer_recurrence(a, q, n):
    assert q_pochhammer(a, q, n + 1) == q_pochhammer(a, q, n) * (1 - a * q**n)
    assert q_pochhammer(a, q, n) == pochhammer_product(a, q, n)


@pytest.mark.parametrize("n", range(0, 11))
def test_gaussian_symmetry_and_unit_sum(n):
    for k in range(n + 1):
        poly = gaussian_binomial_poly(n, k)
        assert poly == gaussian_binomial_poly(n, n - k)
        assert poly == poly[::-1]
        assert len(poly) == k * (n - k) + 1 and min(poly) >= 1
        assert sum(poly) == math.comb(n, k)


@given(q=q_values.filter(lambda q: q not in (0, -1)), n=st.integers(0, 9), k=st.integers(0, 9))
def test_q_binomial_matches_pochhammer_ratio(q, n, k):
    if k > n:
        return
    ratio = q_pochhammer(q, q, n) / (q_pochhammer(q, q, k) * q_pochhammer(q, q, n - k))
    assert q_binomial(n, k, q) == ratio


@given(q=q_values, n=st.integers(1, 9))
def test_theorem_constant_matches_ratio_form(q, n):
    ratio = q_pochhammer(q, q, n) / ((1 - q) ** n * math.factorial(n))
    assert theorem_constant(n, q) == ratio


@pytest.mark.parametrize("n", range(1, 8))
def test_theorem_constant_special_q(n):
    assert theorem_constant(n, 0) == F(1, math.factorial(n))
    assert theorem_constant(n, -1) == (1 if n == 1 else 0)
