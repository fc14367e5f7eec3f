import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from omegaint.arith import RatFunc
from omegaint.errors import ImageOutsideChart, InhomogeneousDegree, OrderOutOfRange
from omegaint.hs import HSForm, hs_derive, hs_pullback, hs_reduce, reparametrize, vanishing_order

from conftest import small

INF = math.inf
WR_COORDS = ("x0", "x1")
T = RatFunc.x()


def form(text, coords=("t",), m=2, r=None):
    return HSForm.parse(text, coords, m, r)


def wronskian_chart():
    return form("d1(x1)*d2(x0) - d1(x0)*d2(x1)", WR_COORDS, 2)


def along(x0, x1):
    return hs_pullback(wronskian_chart(), {"x0": x0, "x1": x1})


# -- examples ----------------------------------------------------------------------------------

def test_derive_examples():
    assert hs_derive(T ** 3, 1, 2) == form("3*t^2*d1(t)", r=1).map_coeffs(lambda c: RatFunc.from_poly(c, "t"))
    want = form("3*t^2*d2(t) + 3*t*d1(t)^2").map_coeffs(lambda c: RatFunc.from_poly(c, "t"))
    assert hs_derive(T ** 3, 2, 2) == want
    with pytest.raises(OrderOutOfRange):
        hs_derive(T, 3, 2)


def test_reduce_examples():
    assert hs_reduce("d1(t)*d1(t) - d1(t)^2", ("t",), 2).is_zero()
    assert hs_reduce("d2(t*t) - (2*t*d2(t) + d1(t)^2)", ("t",), 2).is_zero()
    assert hs_reduce("d1(5)", ("t",), 1).is_zero()
    assert hs_reduce("d2(x^2)", ("x",), 2) == form("2*x*d2(x) + d1(x)^2", ("x",))
    with pytest.raises(InhomogeneousDegree):
        hs_reduce("d1(t) + d2(t)", ("t",), 2)


def test_wronskian_pullbacks():
    a, b = Fraction(3), Fraction(-2)
    assert along(T, T * a + b).is_zero()
    cubic = along(T, T ** 3)
    assert str(cubic) == "-3*t*d1(t)^3"
    assert str(along(T, T ** 2)) == "-d1(t)^3"
    assert vanishing_order(cubic, 0) == 1
    assert vanishing_order(cubic, 1) == 0
    assert vanishing_order(along(T, T), 5) == INF
    assert vanishing_order(along(T ** 2, T ** 3), 0) == 2


def test_pullback_outside_chart():
    with pytest.raises(ImageOutsideChart):
        hs_pullback(wronskian_chart(), {"x0": T, "x1": None})


# -- properties ---------------------------------------------------------------------------------

ratfuncs = st.builds(
    lambda n, d: RatFunc([Fraction(c) for c in n], [Fraction(c) for c in d] if any(d) else [Fraction(1)]),
    st.lists(small, min_size=1, max_size=4),
    st.lists(small, min_size=1, max_size=3),
)


@given(ratfuncs, ratfuncs, st.integers(1, 3))
def test_leibniz(f, g, k):
    m = 3
    lhs = hs_derive(f * g, k, m)
    rhs = None
    for i in range(k + 1):
        term = hs_derive(f, i, m) * hs_derive(g, k - i, m)
        rhs = term if rhs is None else rhs + term
    assert lhs == HSForm(m, k, ("t",), rhs.coeffs)


@given(st.lists(small, min_size=1, max_size=4).filter(any), st.integers(0, 5), st.integers(1, 3))
def test_dife_divisibility(g, n, i):
    if n < i:
        n = i
    f = T ** n * RatFunc([Fraction(c) for c in g])
    for c in hs_derive(f, i, 3).coeffs.values():
        assert c.ord_at(0) >= n - i


def _random_ratfunc(rng, deg):
    while True:
        num = [Fraction(rng.randint(-5, 5)) for _ in range(deg + 1)]
        den = [Fraction(rng.randint(-5, 5)) for _ in range(rng.randint(1, deg + 1))]
        if any(num) and any(den):
            f = RatFunc(num, den)
            if f.degree() >= 1:
                return f


@pytest.mark.parametrize("seed", range(25))
def test_functoriality(seed):
    rng = random.Random(seed)
    rho = _random_ratfunc(rng, rng.randint(1, 3))
    x0, x1 = _random_ratfunc(rng, 2), _random_ratfunc(rng, 3)
    direct = along(x0.compose(rho), x1.compose(rho))
    staged = reparametrize(along(x0, x1), rho)
    assert direct == staged
