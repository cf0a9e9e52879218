import math
from fractions import Fraction

import pytest

from qcalc.expr import parse, to_pointfn

# the four functions used throughout: (text, radius)
TEST_FUNCTIONS = {
    "exp": ("exp(x)", None),
    "sin": ("sin(x)", None),
    "log1p": ("log(1+x)", 1.0),
    "geometric": ("1/(1-x)", 1.0),
}

# f^(n)(0) for the same functions, written out independently of the jets
DERIVATIVES_AT_ZERO = {
    "exp": lambda n: Fraction(1),
    "sin": lambda n: Fraction((0, 1, 0, -1)[n % 4]),
    "log1p": lambda n: Fraction((-1) ** (n + 1) * math.factorial(n - 1)),
    "geometric": lambda n: Fraction(math.factorial(n)),
}


def make_fn(name):
    text, radius = TEST_FUNCTIONS[name]
    return to_pointfn(parse(text), radius, name)


@pytest.fixture(params=sorted(TEST_FUNCTIONS))
def test_fn(request):
    return request.param, make_fn(request.param)


# one summary line per acceptance criterion, shown even without -s
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
