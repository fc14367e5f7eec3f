from fractions import Fraction

import pytest
import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from omegaint.fixtures import load_fixture_form
from omegaint.geometry import SRC, XYZ
from omegaint.arith.poly import Poly

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def quad():
    return load_fixture_form("quad")


@pytest.fixture(scope="session")
def wronskian():
    return load_fixture_form("wronskian")


def to_sympy(p):
    """Oracle conversion through the shared text grammar."""
    return sympy.sympify(str(p).replace("^", "**"))


small = st.integers(-6, 6)
fractions = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5))


@st.composite
def dense(draw, max_degree=5, nonzero=True):
    cs = draw(st.lists(small, min_size=1, max_size=max_degree + 1))
    while cs and cs[-1] == 0:
        cs.pop()
    if nonzero and not cs:
        cs = [draw(st.integers(1, 6))]
    return [Fraction(c) for c in cs]


@st.composite
def binary_forms(draw, degree=None, max_degree=4):
    d = draw(st.integers(1, max_degree)) if degree is None else degree
    cs = draw(st.lists(small, min_size=d + 1, max_size=d + 1).filter(any))
    return Poly({(d - i, i): c for i, c in enumerate(cs)}, SRC)


@st.composite
def ternary_forms(draw, degree=None, max_degree=2):
    d = draw(st.integers(1, max_degree)) if degree is None else degree
    terms = {}
    for i in range(d + 1):
        for j in range(d + 1 - i):
            terms[(i, j, d - i - j)] = draw(small)
    p = Poly(terms, XYZ)
    if p.is_zero():
        p = Poly({(d, 0, 0): 1}, XYZ)
    return p


# acceptance criteria report: one line per criterion, printed after the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, secs, limit, what in sorted(ACCEPTANCE):
        bound = f" (limit {limit:g} s)" if limit else ""
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {secs:7.2f} s{bound}  {what}")
