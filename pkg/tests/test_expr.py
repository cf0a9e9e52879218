import math
import random
from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from qcalc.expr import (
    MAX_DEPTH,
    MAX_TREE_DEPTH,
    X,
    Add,
    BinOp,
    Call,
    Div,
    Mul,
    Neg,
    Num,
    ParseError,
    Pow,
    Sub,
    degree_bound,
    eval_jet,
    eval_scalar,
    has_singularity_risk,
    is_exact_subset,
    parse,
    to_polynomial,
    to_pointfn,
    to_text,
)
from qcalc.jets import jet_derivative
from qcalc.scalar import DomainError, QCalcError

one, two = Num(F(1)), Num(F(2))


# ------------------------------------------------------------------ parsing


@pytest.mark.parametrize(
    "text, tree",
    [
        ("1/(1-x)", Div(one, Sub(one, X))),
        ("exp(x)*sin(x)", Mul(Call("exp", X), Call("sin", X))),
        ("1/2", Div(one, two)),
        ("0.25", Num(F(1, 4))),
        (".5", Num(F(1, 2))),
        ("x-1-2", Sub(Sub(X, one), two)),
        ("x/2/1", Div(Div(X, two), one)),
        ("-x^2", Neg(Pow(X, 2))),
        ("2*-x", Mul(two, Neg(X))),
        ("x^-2", Pow(X, -2)),
        ("2^3^2", Pow(two, 9)),
        ("(x^2)^3", Pow(Pow(X, 2), 3)),
        ("1+2*x", Add(one, Mul(two, X))),
        ("  ((x)) ", X),
        ("log(1+x)", Call("log", Add(one, X))),
    ],
)
def test_parse_structure(text, tree):
    assert parse(text) == tree


@pytest.mark.parametrize(
    "text, position",
    [
        ("2*^x", 2),
        ("", 0),
        ("x+", 2),
        ("(x", 2),
        ("x)", 1),
        ("sin x", 4),
        ("tan(x)", 0),
        ("y", 0),
        ("x^2.5", 2),
        ("x^(2)", 2),
        ("x $ 1", 2),
        ("1e5", 1),
        ("x^99999", 2),
    ],
)
def test_parse_errors_are_positioned(text, position):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.position == position
    assert f"position {position}" in str(info.value)


def test_parse_error_hint():
    with pytest.raises(ParseError) as info:
        parse("2*^x")
    assert info.value.expected and "number" in info.value.expected
    assert isinstance(info.value, ValueError) and isinstance(info.value, QCalcError)


def test_depth_limits():
    parse("(" * (MAX_DEPTH - 5) + "x" + ")" * (MAX_DEPTH - 5))
    for text in (
        "(" * (MAX_DEPTH + 5) + "x" + ")" * (MAX_DEPTH + 5),
        "-" * 5000 + "x",
        "exp(" * 1000 + "x" + ")" * 1000,
        "+".join(["x"] * (MAX_TREE_DEPTH + 10)),
    ):
        with pytest.raises(ParseError, match="too deeply"):
            parse(text)


def test_long_chain_within_limit_is_usable():
    e = parse("+".join(["x"] * (MAX_TREE_DEPTH - 1)))
    assert eval_scalar(e, F(1, 2)) == F(MAX_TREE_DEPTH - 1, 2)
    assert parse(to_text(e)) == e
    assert degree_bound(e) == 1


# ------------------------------------------------------------- round trip

int_nums = st.integers(0, 50).map(lambda v: Num(F(v)))
dec_nums = st.integers(1, 999).map(lambda v: Num(F(v, 100)))
leaves = st.one_of(st.just(X), int_nums, dec_nums)


def _extend(children):
    return st.one_of(
        children.map(Neg),
        st.tuples(st.sampled_from("+-*/"), children, children).map(lambda t: BinOp(*t)),
        st.tuples(children, st.integers(-4, 6)).map(lambda t: Pow(*t)),
        st.tuples(st.sampled_from(["exp", "log", "sin", "cos"]), children).map(lambda t: Call(*t)),
    )


trees = st.recursive(leaves, _extend, max_leaves=12)


@settings(max_examples=300)
@given(trees)
def test_round_trip_of_trees(e):
    assert parse(to_text(e)) == e


@settings(max_examples=300)
@given(st.text(alphabet="x0123456789.+-*/^() expsinlogcos", max_size=30))
def test_round_trip_of_whatever_parses(text):
    try:
        e = parse(text)
    except ParseError as err:
        assert 0 <= err.position <= len(text)
        return
    assert parse(to_text(e)) == e


@settings(max_examples=500)
@given(st.text(max_size=1000))
def test_parser_total_on_arbitrary_text(text):
    try:
        parse(text)
    except ParseError as err:
        assert 0 <= err.position <= len(text)


def test_whitespace_insensitive():
    assert parse(" exp ( x ) * 2 ") == parse("exp(x)*2")


# ------------------------------------------------------------ evaluation


def test_eval_jet_examples():
    assert eval_jet(parse("exp(x)"), 0, 3).coeffs == (1, 1, F(1, 2), F(1, 6))
    assert eval_jet(parse("1/(1-x)"), 0, 4).coeffs == (1, 1, 1, 1, 1)
    for order in (0, 1, 3):
        with pytest.raises(DomainError, match="log"):
            eval_jet(parse("log(x)"), 0, order)


def test_domain_error_names_subexpression():
    with pytest.raises(DomainError, match=r"in 1/\(x-1\)"):
        eval_scalar(parse("exp(x)+1/(x-1)"), 1)
    with pytest.raises(DomainError, match=r"in log\(x-1\)"):
        eval_scalar(parse("2*log(x-1)"), F(1, 2))


def test_eval_scalar_kinds():
    assert eval_scalar(parse("x^2-1/3"), F(1, 2)) == F(-1, 12)
    assert isinstance(eval_scalar(parse("x^2"), F(1, 2), "real"), float)
    assert eval_scalar(parse("exp(x)"), 1) == pytest.approx(math.e, rel=1e-15)
    assert eval_scalar(parse("x*x"), 1j) == -1
    assert eval_scalar(parse("exp(x)"), 0) == 1 and isinstance(eval_scalar(parse("exp(x)"), 0), F)


def test_overflow_is_a_domain_error():
    with pytest.raises(DomainError):
        eval_scalar(parse("exp(exp(exp(x)))"), 100)


@settings(max_examples=200)
@given(trees.filter(is_exact_subset), st.fractions(min_value=-3, max_value=3, max_denominator=7))
def test_exact_subset_stays_exact(e, c):
    try:
        jet = eval_jet(e, c, 3)
    except DomainError:
        return
    assert all(isinstance(a, F) for a in jet.coeffs)


X_SYM = sympy.Symbol("x")


def to_sympy(e):
    if isinstance(e, Num):
        return sympy.Rational(e.value.numerator, e.value.denominator)
    if e == X:
        return X_SYM
    if isinstance(e, Neg):
        return -to_sympy(e.arg)
    if isinstance(e, Pow):
        return to_sympy(e.base) ** e.exponent
    if isinstance(e, Call):
        return getattr(sympy, e.name)(to_sympy(e.arg))
    a, b = to_sympy(e.left), to_sympy(e.right)
    return {"+": a + b, "-": a - b, "*": a * b, "/": a / b}[e.op]


@pytest.mark.parametrize(
    "text", ["exp(x)*sin(x)", "log(2+x^2)/(3-x)", "cos(x)^-2+x^3", "sin(exp(x))-x/7", "(1+x)^5*exp(-x)"]
)
@pytest.mark.parametrize("c", [F(0), F(1, 3), F(-2, 5)])
def test_jet_matches_sympy_derivatives(text, c):
    e = parse(text)
    jet = eval_jet(e, c, 4, "real")
    sym = to_sympy(e)
    for m in range(5):
        expected = float(sympy.diff(sym, X_SYM, m).subs(X_SYM, sympy.Rational(c.numerator, c.denominator)))
        assert jet_derivative(jet, m) == pytest.approx(expected, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("fn", ["exp", "log", "sin", "cos"])
def test_first_derivative_vs_central_difference(fn):
    rng = random.Random(fn)
    for _ in range(10):
        a, b = rng.uniform(0.2, 2), rng.uniform(-1, 1)
        e = parse(f"{fn}({a!r}*x^2+{b!r}*x+3)")
        c = rng.uniform(-1, 1)
        h = 1e-5
        d = jet_derivative(eval_jet(e, c, 1, "real"), 1)
        fd = (eval_scalar(e, c + h, "real") - eval_scalar(e, c - h, "real")) / (2 * h)
        assert abs(fd - d) <= 1e-6 * max(abs(d), 1e-2)


# ------------------------------------------------------- structure helpers


def test_singularity_risk():
    risky = ["1/x", "1/(1-x)", "log(1+x)", "x^-1", "(1+x)^-3", "exp(1/(2-x))"]
    safe = ["exp(x)", "x^3-1/2", "x/2", "log(2)*x", "2^-1*x", "sin(x)*cos(x)"]
    assert all(has_singularity_risk(parse(t)) for t in risky)
    assert not any(has_singularity_risk(parse(t)) for t in safe)


def test_degree_and_polynomial():
    assert degree_bound(parse("x^3+2*x-1")) == 3
    assert degree_bound(parse("(x+1)^2*(x-1)")) == 3
    assert degree_bound(parse("x/2")) == 1
    assert degree_bound(parse("7")) == 0
    for text in ("exp(x)", "1/x", "x^-2", "x/(1+x)"):
        assert degree_bound(parse(text)) is None
    p = to_polynomial(parse("(x+1)^2/2-1/2"))
    assert p.coeffs == (0, 1, F(1, 2))
    with pytest.raises(ValueError):
        to_polynomial(parse("sin(x)"))


def test_to_pointfn():
    f = to_pointfn(parse("exp(x)"))
    assert f.domain_radius == math.inf and f.name == "exp(x)"
    assert f.jet(2).coeffs == (1, 1, F(1, 2))
    with pytest.raises(ValueError, match="radius"):
        to_pointfn(parse("1/(1-x)"))
    g = to_pointfn(parse("1/(1-x)"), 1.0, "geo")
    assert g.name == "geo" and g(F(1, 2)) == 2
    with pytest.raises(DomainError):
        g(1.5)
