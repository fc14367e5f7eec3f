import random
import warnings
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from omegaint.arith import P1Point, parse_poly
from omegaint.errors import ConstantMap, ImageInDivisor, UnequalDegrees
from omegaint.geometry import (
    ASSUMED,
    SRC,
    VERIFIED_LINES,
    VERIFIED_TANGENCY,
    XYZ,
    PlaneDivisor,
    counting_row,
    height,
    moebius,
    ramification_factor,
    ramification_points,
    truncated_counting,
    validate_map,
    vanishing_orders,
)
from omegaint.fuzz import random_lines, random_map, random_moebius, random_self_map

from conftest import ternary_forms

CONIC = ("s^2", "s*t", "t^2")


def test_validate_map_examples():
    assert validate_map(*CONIC).degree == 2
    with pytest.warns(UserWarning, match="common factor"):
        phi = validate_map("s*s", "s*t", "s*(s + t)")
    assert phi.degree == 1
    with pytest.raises(ConstantMap):
        validate_map("s^2", "s^2", "s^2")
    with pytest.raises(UnequalDegrees):
        validate_map("s", "t^2", "s")


def test_height_examples():
    phi = validate_map(*CONIC)
    assert height(phi, PlaneDivisor(["X"])) == 2
    assert height(phi, 4) == 8
    assert height(phi, PlaneDivisor(["Y^2 - 4*X*Z"])) == 4


def test_vanishing_order_examples():
    phi = validate_map(*CONIC)
    row = vanishing_orders(phi, "Z")
    assert dict(row.orders) == {P1Point(1, 0): 2} and row.residual == ()
    row = vanishing_orders(phi, "Y")
    assert dict(row.orders) == {P1Point(0, 1): 1, P1Point(1, 0): 1}
    with pytest.raises(ImageInDivisor):
        vanishing_orders(phi, "Y^2 - X*Z")


def test_counting_examples():
    phi = validate_map(*CONIC)
    assert truncated_counting(phi, PlaneDivisor(["Z"]), 1) == 1
    assert truncated_counting(phi, PlaneDivisor(["Z"]), 2) == 2
    assert truncated_counting(phi, PlaneDivisor(["Y"]), 1) == 2


def test_irrational_blocks_count_by_degree():
    phi = validate_map(*CONIC)
    row = vanishing_orders(phi, "X + 2*Y + 3*Z")       # s^2 + 2st + 3t^2 is irreducible
    assert row.orders == () and row.residual == ((2, 1),)
    assert counting_row(row, 1) == 2


def test_ramification_examples():
    rho = ("s^2", "t^2")
    assert ramification_factor(rho, P1Point(0)) == 2          # t = 0
    assert ramification_factor(rho, P1Point(1)) == 1
    assert ramification_factor(rho, P1Point(0, 1)) == 2       # the other chart


def test_snc_statuses():
    assert PlaneDivisor(["X", "Y", "Z"]).snc_status == VERIFIED_LINES
    assert PlaneDivisor(["X", "Y", "X + Y"]).snc_status == ASSUMED
    assert PlaneDivisor(["Y", "Y^2 - 4*X*Z"]).snc_status == VERIFIED_TANGENCY
    assert PlaneDivisor(["X", "Y^2 - 4*X*Z"]).snc_status == ASSUMED     # X is tangent
    with pytest.raises(ValueError):
        PlaneDivisor(["X", "Y", "X + Y"], snc_status=VERIFIED_LINES)
    with pytest.raises(ValueError):
        PlaneDivisor(["X^2"])


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3).filter(any), min_size=3, max_size=5))
def test_snc_line_test_matches_determinants(vecs):
    lines = [parse_poly(f"{a}*X + {b}*Y + {c}*Z", XYZ) for a, b, c in vecs]
    m = [sympy.Matrix(v) for v in vecs]
    ok = all(sympy.Matrix.hstack(m[i], m[j]).rank() == 2 for i in range(len(m)) for j in range(i + 1, len(m)))
    ok = ok and all(sympy.Matrix.hstack(m[i], m[j], m[k]).det() != 0
                    for i in range(len(m)) for j in range(i + 1, len(m)) for k in range(j + 1, len(m)))
    try:
        status = PlaneDivisor(lines).snc_status
    except ValueError:
        assert not ok
        return
    assert (status == VERIFIED_LINES) == ok


@pytest.mark.parametrize("seed", range(40))
def test_height_identity_and_truncation(seed):
    rng = random.Random(seed)
    phi = random_map(rng, rng.randint(1, 5))
    d = rng.choice([1, 2])
    while True:
        g = parse_poly(" + ".join(f"{rng.randint(-4, 4)}*{mono}" for mono in
                                  (["X", "Y", "Z"] if d == 1 else ["X^2", "Y^2", "Z^2", "X*Y", "X*Z", "Y*Z"])), XYZ)
        if not g.is_zero() and not phi.pullback(g).is_zero():
            break
    row = vanishing_orders(phi, g)
    assert row.rational_total() + row.residual_degree() == d * phi.degree
    for m in (1, 2, 3):
        assert counting_row(row, m) <= m * counting_row(row, 1)


@pytest.mark.parametrize("seed", range(40))
def test_orders_multiply_under_composition(seed):
    rng = random.Random(1000 + seed)
    phi = random_map(rng, rng.randint(1, 3))
    rho = random_self_map(rng, rng.randint(1, 3))
    line = random_lines(rng, 1)[0]
    composed = phi.compose(rho)
    if composed.pullback(line).is_zero():
        return
    inner = dict(vanishing_orders(phi, line).orders)
    outer = vanishing_orders(composed, line)
    for q, c in outer.orders:
        image = P1Point(*(rho[i].evaluate({"s": q.s, "t": q.t}) for i in range(2)))
        assert c == ramification_factor(rho, q) * inner[image]


@pytest.mark.parametrize("seed", range(20))
def test_riemann_hurwitz(seed):
    rng = random.Random(seed)
    e = rng.randint(1, 3)
    (a0, a1), _ = random_moebius(rng)
    # totally ramified maps have only rational critical points
    rho = (a0 ** e, a1 ** e)
    points, residual = ramification_points(rho)
    assert not residual
    assert sum(v - 1 for v in points.values()) == 2 * e - 2
