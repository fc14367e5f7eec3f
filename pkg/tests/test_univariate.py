from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from omegaint.arith import univariate as U
from omegaint.errors import ZeroPolynomial

from conftest import dense

x = sympy.Symbol("x")


def sym(a):
    return sympy.Poly(list(reversed(a)) or [0], x, domain="QQ")


def back(p):
    return U.trim(Fraction(int(c.p), int(c.q)) for c in reversed(p.all_coeffs()))


@given(dense(), dense())
def test_mul_divmod_match_sympy(a, b):
    assert U.mul(a, b) == back(sym(a) * sym(b))
    q, r = U.divmod_(a, b)
    sq, sr = sympy.div(sym(a), sym(b))
    assert q == back(sq) and r == back(sr)


@given(dense(), dense(), dense())
def test_gcd_matches_sympy(a, b, c):
    a2, b2 = U.mul(a, c), U.mul(b, c)
    assert U.gcd_(a2, b2) == back(sympy.gcd(sym(a2), sym(b2)).monic())


def test_gcd_edge_cases():
    assert U.gcd_([], [Fraction(2), Fraction(4)]) == [Fraction(1, 2), Fraction(1)]
    assert U.gcd_([Fraction(3)], [Fraction(1), Fraction(1)]) == [Fraction(1)]


@given(dense(max_degree=6))
def test_squarefree_decomposition_reassembles(a):
    parts = U.squarefree_decomposition(a)
    acc = [Fraction(1)]
    for f, k in parts:
        acc = U.mul(acc, U.power(f, k))
    assert U.monic(acc) == U.monic(a)
    assert U.is_squarefree(U.squarefree_part(a))


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=4), dense(max_degree=3))
def test_rational_roots_found(rs, cofactor):
    a = cofactor
    for r in rs:
        a = U.mul(a, [Fraction(-r), Fraction(1)])
    roots = U.rational_roots(a)
    for r in set(rs):
        assert Fraction(r) in roots
    for r in roots:
        assert U.evaluate(a, r) == 0


def test_ord_at_and_zero():
    a = U.mul(U.power([Fraction(-2), Fraction(1)], 3), [Fraction(1), Fraction(1)])
    assert U.ord_at(a, 2) == 3
    assert U.ord_at(a, 0) == 0
    with pytest.raises(ZeroPolynomial):
        U.ord_at([], 1)


@given(dense(max_degree=4), dense(max_degree=3))
def test_compose_matches_sympy(a, b):
    assert U.compose(a, b) == back(sympy.Poly(sym(a).as_expr().subs(x, sym(b).as_expr()), x, domain="QQ"))
