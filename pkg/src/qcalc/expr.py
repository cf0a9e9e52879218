"""Expression grammar for functions of one variable ``x``.

Grammar (``^`` binds tightest and is right-associative; its exponent must be
a signed integer literal)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := atom ['^' expo]
    expo    := ['-' | '+'] INT ['^' expo]      (folded to one integer)
    atom    := NUMBER | 'x' | FUNC '(' expr ')' | '(' expr ')'
    FUNC    := exp | log | sin | cos

Numbers are integers or decimals and are read exactly (``0.25`` is 1/4).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Union

from .jets import TaylorJet, jet_apply, jet_seed
from .scalar import COMPLEX, EXACT, REAL, DomainError, QCalcError, Scalar, as_scalar, promote

FUNCTIONS = ("exp", "log", "sin", "cos")
MAX_DEPTH = 100  # bracket/call/sign nesting
MAX_TREE_DEPTH = 250  # depth of the finished tree, incl. long +/* chains
MAX_EXPONENT = 10_000


class ParseError(QCalcError, ValueError):
    def __init__(self, message: str, position: int, expected: str | None = None):
        self.position = position
        self.expected = expected
        text = f"{message} at position {position}"
        if expected:
            text += f" (expected {expected})"
        super().__init__(text)


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: "ExprNode"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "ExprNode"
    right: "ExprNode"


@dataclass(frozen=True)
class Pow:
    base: "ExprNode"
    exponent: int


@dataclass(frozen=True)
class Call:
    name: str
    arg: "ExprNode"


ExprNode = Union[Num, Var, Neg, BinOp, Pow, Call]

X = Var()


def Add(a, b):
    return BinOp("+", a, b)


def Sub(a, b):
    return BinOp("-", a, b)


def Mul(a, b):
    return BinOp("*", a, b)


def Div(a, b):
    return BinOp("/", a, b)


# ---------------------------------------------------------------- tokenizer

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))", re.ASCII)


@dataclass(frozen=True)
class _Tok:
    kind: str  # num | name | op | end
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start)
        if m.end() == pos:
            break
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


# ------------------------------------------------------------------- parser

_OPERAND = "a number, 'x', a function call or '('"


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.depth = 0
        self.heights: dict[int, int] = {}

    def node(self, n: ExprNode, pos: int) -> ExprNode:
        # tree height by id(); evaluation and printing recurse on it
        kids = [getattr(n, a) for a in ("arg", "base", "left", "right") if hasattr(n, a)]
        h = 1 + max((self.heights.get(id(k), 1) for k in kids), default=0)
        if h > MAX_TREE_DEPTH:
            raise ParseError("expression nested too deeply", pos)
        self.heights[id(n)] = h
        return n

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> None:
        if self.tok.text != text or self.tok.kind == "end":
            raise ParseError(f"unexpected {self._describe(self.tok)}", self.tok.pos, repr(text))
        self.advance()

    @staticmethod
    def _describe(t: _Tok) -> str:
        return "end of input" if t.kind == "end" else repr(t.text)

    def _enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise ParseError("expression nested too deeply", self.tok.pos)

    def parse(self) -> ExprNode:
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self._describe(self.tok)}", self.tok.pos, "an operator or end of input")
        return node

    def expr(self) -> ExprNode:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            t = self.advance()
            node = self.node(BinOp(t.text, node, self.term()), t.pos)
        return node

    def term(self) -> ExprNode:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            t = self.advance()
            node = self.node(BinOp(t.text, node, self.unary()), t.pos)
        return node

    def unary(self) -> ExprNode:
        if self.tok.kind == "op" and self.tok.text in "+-":
            t = self.advance()
            self._enter()
            arg = self.unary()
            self.depth -= 1
            return self.node(Neg(arg), t.pos) if t.text == "-" else arg
        return self.power()

    def power(self) -> ExprNode:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            t = self.advance()
            base = self.node(Pow(base, self.exponent()), t.pos)
        return base

    def exponent(self) -> int:
        # right-associative chain of integer literals, folded to one integer
        start = self.tok.pos
        sign = 1
        if self.tok.kind == "op" and self.tok.text in "+-":
            sign = -1 if self.advance().text == "-" else 1
        t = self.tok
        if t.kind != "num" or not t.text.isdigit():
            raise ParseError(f"unexpected {self._describe(t)}", t.pos, "an integer exponent")
        self.advance()
        value = sign * int(t.text)
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            self._enter()
            e = self.exponent()
            self.depth -= 1
            if e < 0:
                raise ParseError("negative exponent in an exponent chain", start)
            if abs(value) > 1 and e > math.log(MAX_EXPONENT, abs(value)) + 1:
                raise ParseError("exponent too large", start)
            value = value**e
        if abs(value) > MAX_EXPONENT:
            raise ParseError("exponent too large", start)
        return value

    def atom(self) -> ExprNode:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Num(Fraction(Decimal(t.text)))
        if t.kind == "name":
            if t.text == "x":
                self.advance()
                return X
            if t.text in FUNCTIONS:
                self.advance()
                self.expect("(")
                self._enter()
                arg = self.expr()
                self.depth -= 1
                self.expect(")")
                return self.node(Call(t.text, arg), t.pos)
            raise ParseError(f"unknown name {t.text!r}", t.pos, "'x' or one of " + ", ".join(FUNCTIONS))
        if t.kind == "op" and t.text == "(":
            self.advance()
            self._enter()
            node = self.expr()
            self.depth -= 1
            self.expect(")")
            return node
        raise ParseError(f"unexpected {self._describe(t)}", t.pos, _OPERAND)


def parse(text: str) -> ExprNode:
    """Parse ``text`` into an expression tree, or raise a positioned ParseError."""
    return _Parser(text).parse()


# ----------------------------------------------------------------- printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def to_text(e: ExprNode) -> str:
    """Render ``e`` so that ``parse(to_text(e)) == e`` for parsed trees."""
    return _show(e, 0)


def _num_text(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    d = v.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d == 1 and v >= 0:
        places = max(twos, fives)
        digits = str(v.numerator * 10**places // v.denominator).rjust(places + 1, "0")
        return f"{digits[:-places]}.{digits[-places:]}"
    return f"({v.numerator}/{v.denominator})"


def _show(e: ExprNode, ctx: int) -> str:
    if isinstance(e, Num):
        s = _num_text(e.value)
        return f"({s})" if e.value < 0 else s
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Call):
        return f"{e.name}({_show(e.arg, 0)})"
    if isinstance(e, Pow):
        s = f"{_show(e.base, 4)}^{e.exponent}"
        return f"({s})" if ctx >= 4 else s
    if isinstance(e, Neg):
        s = "-" + _show(e.arg, 3)
        return f"({s})" if ctx > 3 else s
    prec = _PREC[e.op]
    s = f"{_show(e.left, prec)}{e.op}{_show(e.right, prec + 1)}"
    return f"({s})" if ctx > prec else s


# --------------------------------------------------------------- evaluation


def _has_x(e: ExprNode) -> bool:
    if isinstance(e, Var):
        return True
    if isinstance(e, Num):
        return False
    if isinstance(e, (Neg, Call)):
        return _has_x(e.arg)
    if isinstance(e, Pow):
        return _has_x(e.base)
    return _has_x(e.left) or _has_x(e.right)


def has_singularity_risk(e: ExprNode) -> bool:
    """True if ``e`` divides by, inverts or takes log of something in x."""
    if isinstance(e, (Num, Var)):
        return False
    if isinstance(e, Neg):
        return has_singularity_risk(e.arg)
    if isinstance(e, Call):
        return (e.name == "log" and _has_x(e.arg)) or has_singularity_risk(e.arg)
    if isinstance(e, Pow):
        return (e.exponent < 0 and _has_x(e.base)) or has_singularity_risk(e.base)
    if e.op == "/" and _has_x(e.right):
        return True
    return has_singularity_risk(e.left) or has_singularity_risk(e.right)


def is_exact_subset(e: ExprNode) -> bool:
    """No transcendental calls: evaluates exactly at rational points."""
    if isinstance(e, (Num, Var)):
        return True
    if isinstance(e, Call):
        return False
    if isinstance(e, Neg):
        return is_exact_subset(e.arg)
    if isinstance(e, Pow):
        return is_exact_subset(e.base)
    return is_exact_subset(e.left) and is_exact_subset(e.right)


def _literal(v: Fraction, kind: str | None):
    return v if kind in (None, EXACT) else promote(v, kind)


def eval_jet(e: ExprNode, center, order: int, kind: str | None = None) -> TaylorJet:
    """Taylor jet of ``e`` at ``center`` truncated at ``order``.

    ``kind`` forces floating (``"real"``/``"complex"``) evaluation; by
    default literals stay exact and the center decides.
    """
    center = as_scalar(center)
    if kind in (REAL, COMPLEX):
        center = promote(center, kind)
    try:
        return _jet(e, center, order, kind)
    except OverflowError:
        raise DomainError(f"floating-point overflow evaluating {to_text(e)}") from None


def _located(err: DomainError, e: ExprNode) -> DomainError:
    # annotate with the innermost failing subexpression only
    if getattr(err, "located", False):
        return err
    out = DomainError(f"{err} in {to_text(e)}")
    out.located = True
    return out


def _jet(e: ExprNode, c, N: int, kind) -> TaylorJet:
    if isinstance(e, Num):
        return jet_seed("constant", _literal(e.value, kind), c, N)
    if isinstance(e, Var):
        return jet_seed("variable", None, c, N)
    if isinstance(e, Neg):
        return -_jet(e.arg, c, N, kind)
    if isinstance(e, Pow):
        try:
            return jet_apply("int_pow", _jet(e.base, c, N, kind), e.exponent)
        except DomainError as err:
            raise _located(err, e) from None
    if isinstance(e, Call):
        try:
            return jet_apply(e.name, _jet(e.arg, c, N, kind))
        except DomainError as err:
            raise _located(err, e) from None
    u, v = _jet(e.left, c, N, kind), _jet(e.right, c, N, kind)
    if e.op == "+":
        return u + v
    if e.op == "-":
        return u - v
    if e.op == "*":
        return u * v
    try:
        return u / v
    except DomainError as err:
        raise _located(err, e) from None


def eval_scalar(e: ExprNode, x, kind: str | None = None) -> Scalar:
    """Value of ``e`` at ``x`` (the order-0 jet)."""
    return eval_jet(e, x, 0, kind).coeffs[0]


def degree_bound(e: ExprNode) -> int | None:
    """Polynomial degree bound in x, or None if ``e`` is not a polynomial."""
    if isinstance(e, Num):
        return 0
    if isinstance(e, Var):
        return 1
    if isinstance(e, Neg):
        return degree_bound(e.arg)
    if isinstance(e, Call):
        return None
    if isinstance(e, Pow):
        d = degree_bound(e.base)
        if d is None:
            return None
        if e.exponent < 0:
            return 0 if d == 0 else None
        return d * e.exponent
    a, b = degree_bound(e.left), degree_bound(e.right)
    if a is None or b is None:
        return None
    if e.op in "+-":
        return max(a, b)
    if e.op == "*":
        return a + b
    return a if b == 0 else None


def to_polynomial(e: ExprNode):
    """Exact Polynomial equal to ``e``; ValueError if ``e`` is not one."""
    from .exactpoly import Polynomial

    d = degree_bound(e)
    if d is None:
        raise ValueError(f"not a polynomial expression: {to_text(e)}")
    jet = eval_jet(e, Fraction(0), max(d, 0))
    return Polynomial(jet.coeffs)


def to_pointfn(e: ExprNode, radius: float | None = None, name: str | None = None):
    """Wrap ``e`` as a PointFn with a jet oracle.

    Expressions that divide by, invert or take log of an x-dependent
    subexpression need an explicit ``radius``.
    """
    from .qoperator import PointFn

    if radius is None:
        if has_singularity_risk(e):
            raise ValueError(f"{to_text(e)} may have a singularity; an explicit domain radius is required")
        radius = math.inf

    def evaluator(x):
        return eval_scalar(e, x)

    def oracle(center, order):
        return eval_jet(e, center, order)

    return PointFn(evaluator, radius, oracle, name or to_text(e))
