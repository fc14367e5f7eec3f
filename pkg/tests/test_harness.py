import math
import random
from fractions import Fraction

import pytest

from omegaint.arith import P1Point
from omegaint.errors import (
    ComponentNotIntegral,
    DegenerateFamily,
    HypothesisFailed,
    ImageInExceptional,
    ImageIsLine,
    NotCampana,
    WitnessInvalid,
)
from omegaint.geometry import PlaneDivisor, validate_map
from omegaint.harness import (
    CONTRAPOSITIVE,
    EXCEPTIONAL,
    FORCED,
    HOLDS,
    PASS,
    VACUOUS,
    VIOLATION,
    QuadFamily,
    Witness,
    campana_check,
    dosvar_order_check,
    dual_conic_map,
    exceptional_components,
    exceptional_set_quadfamily,
    is_campana,
    main_inequality_report,
    main_verdict,
    noguchi_wang_check,
    quad_family_scenario,
    sigma,
    structured_candidates,
    validate_witness,
)

PARAMS = [(1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (1, -2), (2, 1), (2, -1), (1, 3), (1, -3), (3, 1),
          (3, -1), (2, 3), (2, -3), (3, 2), (3, -2), (1, 4)]
FAMILY = QuadFamily("X", "Y", "Z")
CONIC = validate_map("s^2", "s*t", "t^2")
L4 = PlaneDivisor(["X", "Y", "Z", "X + 2*Y + 3*Z"])
L5 = PlaneDivisor(["X", "Y", "Z", "X + 2*Y + 3*Z", "X - Y + 7*Z"])


def family_divisor(n):
    return PlaneDivisor([FAMILY.line(*p) for p in PARAMS[:n]])


def test_main_verdict_table():
    assert main_verdict(3, 2, True) == FORCED
    assert main_verdict(3, 2, False) == VIOLATION
    assert main_verdict(2, 2, True) == VACUOUS
    assert main_verdict(2, 2, False) == CONTRAPOSITIVE


def test_main_envelope_forced(quad):
    rep = main_inequality_report(quad, family_divisor(9), FAMILY.envelope_map())
    assert (rep.lhs, rep.rhs, rep.verdict) == (10, 9, FORCED)
    assert rep.integral and not rep.violation
    assert rep.counts == (1,) * 9


def test_main_wronskian(wronskian):
    rep = main_inequality_report(wronskian, L4, CONIC)
    assert (rep.lhs, rep.rhs, rep.verdict) == (2, 8, CONTRAPOSITIVE)
    rep = main_inequality_report(wronskian, L4, validate_map("s", "t", "s + 5*t"))
    assert (rep.lhs, rep.rhs, rep.verdict) == (1, 4, VACUOUS)


def test_main_requires_integral_components(quad):
    with pytest.raises(ComponentNotIntegral):
        main_inequality_report(quad, PlaneDivisor(["X", "Y", "Z"]), CONIC)


def test_dosvar(wronskian, quad):
    rep = dosvar_order_check(wronskian, ["Y"], validate_map("s^2*t", "t^3", "s^3"), P1Point(1, 0))
    assert (rep.bound, rep.actual, rep.verdict) == (1, 1, HOLDS)
    rep = dosvar_order_check(wronskian, ["Y"], validate_map("s*t^2", "t^3", "s^3"), P1Point(1, 0))
    assert (rep.bound, rep.actual) == (1, 2)
    rep = dosvar_order_check(quad, ["X + Y + Z"], FAMILY.envelope_map(), P1Point(1, -1))
    assert rep.actual == math.inf and rep.verdict == HOLDS
    assert "actual = inf" in rep.lines()[0]
    with pytest.raises(HypothesisFailed):
        dosvar_order_check(wronskian, ["Y"], CONIC, P1Point(1, 0))      # order 1 <= m


def test_noguchi_wang(wronskian):
    rep = noguchi_wang_check(L5, CONIC)
    assert (rep.lhs, rep.rhs, rep.verdict) == (4, 10, HOLDS)
    with pytest.raises(ImageIsLine):
        noguchi_wang_check(L4, validate_map("s", "t", "s + t"))


def test_sigma_and_family():
    assert sigma(1, 4) == 4 and sigma(2, -1) == 0
    with pytest.raises(ValueError):
        sigma(0, 1)
    with pytest.raises(DegenerateFamily):
        QuadFamily("X", "Y", "X + Y")
    with pytest.raises(DegenerateFamily):
        QuadFamily("X^2", "Y", "Z")
    assert str(FAMILY.envelope()) == "Y^2 - 4*X*Z"
    assert str(FAMILY.line(1, 2)) == "X + 2*Y + 4*Z"


def test_envelope_tangent_to_family():
    ex = exceptional_set_quadfamily(FAMILY, PARAMS[:5])
    assert all(ok for _, ok in ex.tangency_checked)
    assert ex.contains_image(FAMILY.envelope_map())
    assert not ex.contains_image(CONIC)


def test_quad_holds_and_exceptional():
    phi = validate_map("s", "t", "s + t")
    rep = quad_family_scenario(FAMILY, PARAMS, Fraction(1, 4), phi)
    assert (rep.lhs, rep.rhs, rep.verdict) == (Fraction(51, 4), 17, HOLDS)
    with pytest.raises(ImageInExceptional) as info:
        quad_family_scenario(FAMILY, PARAMS, Fraction(1, 4), FAMILY.envelope_map())
    rep = info.value.report
    assert rep.verdict == EXCEPTIONAL and rep.lhs == Fraction(51, 2) and rep.rhs == 17
    assert "would-be inequality 51/2 < 17 is false" in rep.notes
    rep = quad_family_scenario(FAMILY, PARAMS, Fraction(1, 4), FAMILY.envelope_map(), strict=False)
    assert rep.exceptional


def test_quad_hypotheses():
    phi = validate_map("s", "t", "s + t")
    with pytest.raises(HypothesisFailed):
        quad_family_scenario(FAMILY, PARAMS[:16], Fraction(1, 4), phi)
    with pytest.raises(HypothesisFailed):
        quad_family_scenario(FAMILY, PARAMS[:16] + [(2, 4)], Fraction(1, 4), phi)


def test_is_campana():
    assert is_campana(FAMILY.envelope_map(), family_divisor(9), Fraction(1, 2))
    assert not is_campana(CONIC, ["X + Y + Z"], Fraction(1, 2))
    assert is_campana(CONIC, ["Z"], Fraction(1, 2))          # one tangent contact of order 2


def test_witness():
    validate_witness(Witness(2, 1), 4, [1] * 9, [Fraction(1, 2)] * 9, 1)
    with pytest.raises(WitnessInvalid):
        validate_witness(Witness(2, 2), 4, [1] * 9, [Fraction(1, 2)] * 9, 1)
    with pytest.raises(WitnessInvalid):
        validate_witness(Witness(2, 1, (("X", -1),)), 4, [1] * 9, [Fraction(1, 2)] * 9, 1)


def test_campana_check(quad):
    d9 = family_divisor(9)
    comps = exceptional_components(quad, d9, Witness(2, 1))
    assert str(comps[0]) == "Y^2 - 4*X*Z" and len(comps) == 10
    cands = structured_candidates(FAMILY, PARAMS[:9], random.Random(0), limit=30)
    rep = campana_check(quad, d9, Fraction(1, 2), Witness(2, 1), FAMILY.envelope_map(), cands)
    assert rep.verdict == PASS and rep.outside == 0 and rep.candidates == len(cands) + 1
    with pytest.raises(HypothesisFailed):
        campana_check(quad, d9, 1, Witness(2, 1))
    with pytest.raises(NotCampana):
        campana_check(quad, d9, Fraction(1, 2), Witness(2, 1), validate_map("s", "t", "s + t"))


def test_dual_conic_is_tangent():
    pts = [FAMILY.dual_point(*p) for p in PARAMS[2:7]]
    phi = dual_conic_map(pts)
    assert phi is not None and phi.degree == 2
    for p in PARAMS[2:7]:
        from omegaint.geometry import vanishing_orders
        orders = vanishing_orders(phi, FAMILY.line(*p))
        assert all(c % 2 == 0 for _, c in orders.orders)
