"""Height inequalities, exceptional sets and Campana checks assembled into reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .arith.binary import P1Point, roots
from .arith.poly import Poly, poly_gcd
from .errors import (
    ComponentNotIntegral,
    DegenerateFamily,
    HypothesisFailed,
    ImageInDivisor,
    ImageInExceptional,
    ImageIsLine,
    NotCampana,
    WitnessInvalid,
)
from .geometry import (
    GENUS,
    SRC,
    VERIFIED_LINES,
    XYZ,
    PlaneDivisor,
    RationalMap,
    _as_xyz,
    counting_row,
    det3,
    height,
    line_coeffs,
    validate_map,
    vanishing_orders,
)
from .surface import discriminant_locus, is_integral_parametrized, order_along

VACUOUS = "VACUOUS"
FORCED = "FORCED_AND_CONFIRMED"
CONTRAPOSITIVE = "CONTRAPOSITIVE_OK"
VIOLATION = "VIOLATION"
HOLDS = "HOLDS"
EXCEPTIONAL = "EXCEPTIONAL"
PASS = "PASS"


def _fmt(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class ScenarioReport:
    scenario: str
    check: str
    lhs: Fraction
    rhs: Fraction
    counts: tuple = ()
    integral: object = None
    verdict: str = HOLDS
    exceptional: object = None
    notes: tuple = field(default=())
    map_degree: int = 0

    @property
    def violation(self):
        return self.verdict == VIOLATION

    def lines(self):
        head = f"[{self.check}] {self.scenario}: LHS = {_fmt(self.lhs)}, RHS = {_fmt(self.rhs)} -> {self.verdict}"
        out = [head]
        if self.counts:
            out.append("  counts: " + ", ".join(str(c) for c in self.counts))
        if self.integral is not None:
            out.append(f"  image omega-integral: {'yes' if self.integral else 'no'}")
        if self.exceptional is not None:
            out.append(f"  image in exceptional set: {'yes' if self.exceptional else 'no'}")
        out.extend("  note: " + n for n in self.notes)
        return out


def main_verdict(lhs, rhs, integral):
    if lhs > rhs:
        return FORCED if integral else VIOLATION
    return VACUOUS if integral else CONTRAPOSITIVE


def genus_term(r, g=GENUS):
    return 2 * r * max(0, g - 1)


# -- component integrality -------------------------------------------------------------------

def line_map(g):
    """A parametrisation of the line ``{g = 0}``."""
    a = line_coeffs(g)
    # two independent kernel vectors of (a0, a1, a2)
    basis = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        v = [Fraction(0)] * 3
        v[i], v[j] = a[j], -a[i]
        if any(v) and (not basis or _independent(basis[0], v)):
            basis.append(v)
        if len(basis) == 2:
            break
    s, t = Poly.var("s", SRC), Poly.var("t", SRC)
    return validate_map(*[(s * basis[0][k] + t * basis[1][k]).with_variables(SRC) for k in range(3)])


def _independent(u, v):
    return any(u[i] * v[j] - u[j] * v[i] for i in range(3) for j in range(i + 1, 3))


_INTEGRAL_CACHE = {}


def component_is_integral(form, g, param=None):
    """Decide integrality of a component from a parametrisation (lines are automatic)."""
    g = _as_xyz(g)
    key = (repr(form), str(g))
    if key in _INTEGRAL_CACHE:
        return _INTEGRAL_CACHE[key]
    if param is None:
        if g.total_degree() != 1:
            raise ComponentNotIntegral(f"no parametrisation available for {g}")
        param = line_map(g)
    if not param.pullback(g).is_zero():
        raise ValueError(f"the stored parametrisation does not lie on {g}")
    ok = is_integral_parametrized(form, param)
    _INTEGRAL_CACHE[key] = ok
    return ok


def _require_integral(form, divisor, params=None):
    for i, g in enumerate(divisor.components):
        p = params[i] if params else None
        if not component_is_integral(form, g, p):
            raise ComponentNotIntegral(f"component {g} is not omega-integral")


# -- main height inequality -------------------------------------------------------------------

def main_inequality_report(form, divisor, phi, m=None, r=None, k=None, params=None, name="main"):
    """``h_O(D)(phi) - h_L(phi)`` against ``sum_i N^(m)(D_i, phi) + 2r max(0, g-1)``."""
    m = form.m if m is None else m
    r = form.r if r is None else r
    k = form.k if k is None else k
    _require_integral(form, divisor, params)
    counts = []
    for g, mult in divisor:
        counts.append(counting_row(vanishing_orders(phi, g), m, mult))
    lhs = Fraction(height(phi, divisor) - k * phi.degree)
    rhs = Fraction(sum(counts) + genus_term(r))
    integral = is_integral_parametrized(form, phi)
    verdict = main_verdict(lhs, rhs, integral)
    notes = [f"SNC status {divisor.snc_status}"]
    return ScenarioReport(name, "main", lhs, rhs, tuple(counts), integral, verdict, None,
                          tuple(notes), phi.degree)


# -- vanishing order at a point -----------------------------------------------------------------

def _gradient(g, point):
    vals = dict(zip(XYZ, point))
    return [g.diff(v).evaluate(vals) for v in XYZ]


def _rank_vectors(vectors):
    from .geometry import _rank

    return _rank(vectors) if vectors else 0


def dosvar_order_check(form, components, phi, q, m=None, params=None, name="dosvar"):
    """Vanishing order of ``phi^* omega`` at ``q`` against ``sum c_i - k m``."""
    m = form.m if m is None else m
    if not isinstance(q, P1Point):
        q = P1Point(*q) if isinstance(q, tuple) else P1Point(q)
    comps = [_as_xyz(g) for g in components]
    if not comps:
        raise HypothesisFailed("no components through the point")
    orders = []
    for g in comps:
        row = vanishing_orders(phi, g)
        orders.append(dict(row.orders).get(q, 0))
    if any(c <= m for c in orders):
        raise HypothesisFailed(f"orders {orders} at {q} do not all exceed m = {m}")
    point = phi.at(q)
    grads = [_gradient(g, point) for g in comps]
    if _rank_vectors(grads) < len(comps):
        raise HypothesisFailed(f"components are not normal crossing at {point}")
    for i, g in enumerate(comps):
        if not component_is_integral(form, g, params[i] if params else None):
            raise ComponentNotIntegral(f"component {g} is not omega-integral")
    bound = sum(orders) - len(comps) * m
    actual = order_along(form, phi, q)
    verdict = HOLDS if actual >= bound else VIOLATION
    shown = "inf" if actual == float("inf") else str(actual)
    notes = (f"point {q}, orders {orders}, bound {bound}, actual {shown}",)
    return DosvarReport(name, bound, actual, tuple(orders), verdict, notes)


@dataclass(frozen=True)
class DosvarReport:
    scenario: str
    bound: int
    actual: object
    orders: tuple
    verdict: str
    notes: tuple = ()

    check = "dosvar"

    @property
    def violation(self):
        return self.verdict == VIOLATION

    def lines(self):
        shown = "inf" if self.actual == float("inf") else str(self.actual)
        return [f"[dosvar] {self.scenario}: bound = {self.bound}, actual = {shown} -> {self.verdict}",
                *("  note: " + n for n in self.notes)]


# -- Noguchi-Wang check ----------------------------------------------------------------------

def noguchi_wang_check(lines, phi, name="nw"):
    """``(q - 3) h(phi) <= sum N^(2)(L_i, phi) + 6 max(0, g - 1)`` for lines in general position."""
    divisor = lines if isinstance(lines, PlaneDivisor) else PlaneDivisor(lines, snc_status=VERIFIED_LINES)
    if divisor.snc_status != VERIFIED_LINES:
        divisor = PlaneDivisor(divisor.components, divisor.multiplicities, VERIFIED_LINES)
    if phi.is_line():
        raise ImageIsLine(f"the image of {phi} is a line")
    counts = [counting_row(vanishing_orders(phi, g), 2) for g in divisor.components]
    q = len(divisor.components)
    lhs = Fraction((q - 3) * phi.degree)
    rhs = Fraction(sum(counts) + genus_term(3))
    verdict = HOLDS if lhs <= rhs else VIOLATION
    return ScenarioReport(name, "nw", lhs, rhs, tuple(counts), None, verdict, None, (), phi.degree)


# -- quadratic family ------------------------------------------------------------------------

def sigma(alpha, beta):
    """``sigma(O(alpha), O(beta)) = beta / alpha`` on P^2 (clamped at 0)."""
    if alpha <= 0:
        raise ValueError("the first sheaf must be ample")
    return max(Fraction(0), Fraction(beta, alpha))


class QuadFamily:
    """Lines ``s^2 a + s t b + t^2 c`` for linear forms ``a, b, c`` in X, Y, Z."""

    def __init__(self, a="X", b="Y", c="Z"):
        self.forms = tuple(_as_xyz(f) for f in (a, b, c))
        for f in self.forms:
            if f.total_degree() != 1 or not f.is_homogeneous():
                raise DegenerateFamily("family coefficients must be linear forms")
        self.matrix = [line_coeffs(f) for f in self.forms]
        if det3(self.matrix) == 0:
            raise DegenerateFamily("the family's coefficient forms are dependent (lines concurrent)")

    def line(self, s0, t0=None):
        q = P1Point(s0, t0) if t0 is not None else P1Point(s0)
        a, b, c = self.forms
        return (a * (q.s * q.s) + b * (q.s * q.t) + c * (q.t * q.t)).primitive().with_variables(XYZ)

    def envelope(self):
        a, b, c = self.forms
        return (b * b - a * c * 4).primitive().with_variables(XYZ)

    def envelope_map(self):
        inv = _inverse3(self.matrix)
        s, t = Poly.var("s", SRC), Poly.var("t", SRC)
        target = [s * s, s * t * 2, t * t]
        coords = []
        for i in range(3):
            acc = Poly.zero(SRC)
            for j in range(3):
                acc = acc + target[j] * inv[i][j]
            coords.append(acc.with_variables(SRC))
        return validate_map(*coords)

    def dual_point(self, s0, t0=None):
        """The line at ``[s0:t0]`` as a point of the dual plane."""
        return line_coeffs(self.line(s0, t0))


def _inverse3(m):
    d = det3(m)
    cof = [[Fraction(0)] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            rows = [r for k, r in enumerate(m) if k != i]
            minor = [[x for l, x in enumerate(r) if l != j] for r in rows]
            cof[i][j] = (-1) ** (i + j) * (minor[0][0] * minor[1][1] - minor[0][1] * minor[1][0])
    # inverse = adjugate / det, adjugate = cofactor transposed
    return [[cof[j][i] / d for j in range(3)] for i in range(3)]


@dataclass(frozen=True)
class ExceptionalSet:
    envelope: Poly
    components: tuple
    tangency_checked: tuple

    def contains_image(self, phi):
        return any(phi.pullback(g).is_zero() for g in self.components)

    def lines(self):
        out = [f"envelope: {self.envelope} = 0"]
        out.append("Z components: " + "; ".join(str(g) for g in self.components))
        for label, ok in self.tangency_checked:
            out.append(f"  tangency with line at {label}: {'order 2' if ok else 'FAILED'}")
        return out


def exceptional_set_quadfamily(family, params=()):
    """``Z = Y u D`` with ``Y`` the envelope, after verifying order-2 contact with every line."""
    if not isinstance(family, QuadFamily):
        family = QuadFamily(*family)
    env = family.envelope()
    emap = family.envelope_map()
    if not emap.pullback(env).is_zero():
        raise AssertionError("envelope parametrisation is off the envelope")
    sample = list(params) or [(1, 0), (0, 1), (1, 1)]
    checked = []
    lines = []
    for p in sample:
        q = P1Point(*p) if isinstance(p, tuple) else p
        line = family.line(q.s, q.t)
        lines.append(line)
        orders, residual = roots(emap.pullback(line), SRC)
        checked.append((str(q), not residual and list(orders.values()) == [2]))
    comps = (env,) + (tuple(lines) if params else ())
    return ExceptionalSet(env, comps, tuple(checked))


def quad_family_scenario(family, params, eps, phi, strict=True, name="quad"):
    """``(1 - eps) h_O(D)(phi) < sum_j N^(1)(L_j, phi) + 4 max(0, g - 1)`` outside ``Y u D``."""
    if not isinstance(family, QuadFamily):
        family = QuadFamily(*family)
    eps = Fraction(eps)
    q = len(params)
    pts = [P1Point(*p) if isinstance(p, tuple) else p for p in params]
    if len(set(pts)) != q:
        raise HypothesisFailed("family parameters must be distinct")
    if not (0 < eps <= 1) or q <= 4 / eps:
        raise HypothesisFailed(f"need q > 4/eps, got q = {q}, eps = {_fmt(eps)}")
    lines = [family.line(p.s, p.t) for p in pts]
    env = family.envelope()
    in_y = phi.pullback(env).is_zero()
    in_d = any(phi.pullback(g).is_zero() for g in lines)
    h = q * phi.degree
    lhs = (1 - eps) * h
    notes = [f"sigma(O(1), O(4)) = {_fmt(sigma(1, 4))}"]
    if in_y or in_d:
        # the would-be inequality, with lines containing the image skipped
        counts = tuple(counting_row(vanishing_orders(phi, g), 1) if not phi.pullback(g).is_zero() else 0
                       for g in lines)
        rhs = Fraction(sum(counts) + genus_term(2))
        notes.append("image in Y∪D" + (" (envelope)" if in_y else ""))
        notes.append(f"would-be inequality {_fmt(lhs)} < {_fmt(rhs)} is "
                     f"{'true' if lhs < rhs else 'false'}")
        report = ScenarioReport(name, "quad", lhs, rhs, counts, None, EXCEPTIONAL, True, tuple(notes),
                                phi.degree)
        if strict:
            err = ImageInExceptional(f"the image of {phi} lies in Y∪D")
            err.report = report
            raise err
        return report
    counts = tuple(counting_row(vanishing_orders(phi, g), 1) for g in lines)
    rhs = Fraction(sum(counts) + genus_term(2))
    verdict = HOLDS if lhs < rhs else VIOLATION
    return ScenarioReport(name, "quad", lhs, rhs, counts, None, verdict, False, tuple(notes), phi.degree)


# -- Campana curves ----------------------------------------------------------------------------

def _components(d):
    if isinstance(d, PlaneDivisor):
        return list(d.components)
    return [_as_xyz(g) for g in d]


def is_campana(phi, components, eps):
    """Every positive contact order with ``D_j`` is at least ``1/eps_j``."""
    comps = _components(components)
    eps = [Fraction(e) for e in (eps if isinstance(eps, (list, tuple)) else [eps] * len(comps))]
    if len(eps) != len(comps):
        raise ValueError("one epsilon per component")
    for e in eps:
        if not 0 < e <= 1:
            raise ValueError("epsilon must lie in (0, 1]")
    for g, e in zip(comps, eps):
        row = vanishing_orders(phi, g)
        need = 1 / e
        for _, c in row.orders:
            if c < need:
                return False
        for _, c in row.residual:
            if c < need:
                return False
    return True


@dataclass(frozen=True)
class Witness:
    """``M (-D_L + (D - D_{m eps})) ~ A + E`` recorded by degrees."""

    M: int
    a: int
    E: tuple = ()   # ((G, multiplicity), ...)

    def degree_E(self):
        return sum(n * int(_as_xyz(g).total_degree()) for g, n in self.E)


def validate_witness(witness, k, degrees, eps, m):
    if witness.M < 1:
        raise WitnessInvalid("M must be a positive integer")
    if witness.a <= 0:
        raise WitnessInvalid("the ample part must have positive degree")
    for g, n in witness.E:
        if n < 0:
            raise WitnessInvalid(f"E is not effective: {g} has multiplicity {n}")
    lhs = witness.M * (-k + sum((1 - m * e) * d for e, d in zip(eps, degrees)))
    if lhs != witness.a + witness.degree_E():
        raise WitnessInvalid(f"degrees do not match: {_fmt(lhs)} != {witness.a} + {witness.degree_E()}")


@dataclass(frozen=True)
class CampanaReport:
    scenario: str
    verdict: str
    candidates: int
    campana: int
    outside: int
    notes: tuple = ()

    check = "campana"

    @property
    def violation(self):
        return self.verdict == VIOLATION

    def lines(self):
        out = [f"[campana] {self.scenario}: {self.candidates} candidate(s), {self.campana} Campana, "
               f"{self.outside} outside Z -> {self.verdict}"]
        out.extend("  note: " + n for n in self.notes)
        return out


def exceptional_components(form, divisor, witness=None, extra=()):
    """Components of ``Z = Delta(omega) u supp E u supp D u V``."""
    comps = []
    if form.m == 1:
        delta = discriminant_locus(form).polynomial
        if not delta.is_constant():
            comps.append(delta)
    if witness is not None:
        comps.extend(_as_xyz(g) for g, n in witness.E if n > 0)
    comps.extend(_components(divisor))
    comps.extend(_as_xyz(g) for g in extra)
    return comps


def in_zero_set(phi, comps):
    return any(phi.pullback(g).is_zero() for g in comps)


def campana_check(form, divisor, eps, witness, phi=None, candidates=(), m=None, k=None,
                  extra=(), name="campana"):
    """Every rational Campana curve must lie in ``Z``; reports any counterexample."""
    m = form.m if m is None else m
    k = form.k if k is None else k
    comps = _components(divisor)
    eps = [Fraction(e) for e in (eps if isinstance(eps, (list, tuple)) else [eps] * len(comps))]
    for e in eps:
        if not 0 < e < Fraction(1, m):
            raise HypothesisFailed(f"epsilon {_fmt(e)} is not below 1/m = 1/{m}")
    degrees = [int(g.total_degree()) for g in comps]
    validate_witness(witness, k, degrees, eps, m)
    zset = exceptional_components(form, divisor, witness, extra)
    notes = []
    tested = campana = outside = 0
    maps = ([phi] if phi is not None else []) + list(candidates)
    for i, f in enumerate(maps):
        in_z = in_zero_set(f, zset)
        tested += 1
        if in_z:
            if i == 0 and phi is not None:
                notes.append(f"{f} lies in Z")
            campana += 1 if _campana_or_inside(f, comps, eps) else 0
            continue
        try:
            ok = is_campana(f, comps, eps)
        except ImageInDivisor:
            ok = False
        if i == 0 and phi is not None and not ok:
            raise NotCampana(f"{f} is not a Campana curve for these weights")
        if ok:
            campana += 1
            outside += 1
            notes.append(f"Campana curve outside Z: {f}")
    verdict = VIOLATION if outside else PASS
    if not outside and candidates:
        notes.append("no rational Campana curve outside Z among the candidates")
    return CampanaReport(name, verdict, tested, campana, outside, tuple(notes))


def _campana_or_inside(phi, comps, eps):
    try:
        return is_campana(phi, comps, eps)
    except ImageInDivisor:
        return False


# -- structured candidate search ----------------------------------------------------------------

def _conic_through(points):
    """Coefficients (AA, BB, CC, AB, AC, BC) of conics through the points, as a nullspace basis."""
    rows = [[p[0] * p[0], p[1] * p[1], p[2] * p[2], p[0] * p[1], p[0] * p[2], p[1] * p[2]] for p in points]
    return _nullspace(rows, 6)


def _nullspace(rows, n):
    m = [list(map(Fraction, r)) for r in rows]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def _sym(c):
    aa, bb, cc, ab, ac, bc = c
    return [[aa, ab / 2, ac / 2], [ab / 2, bb, bc / 2], [ac / 2, bc / 2, cc]]


def dual_conic_map(points):
    """The conic tangent to the five lines given as dual points, as a map, or ``None``.

    The dual conic through the points is parametrised from the first point;
    the tangent line at ``psi(s, t)`` is ``psi_s x psi_t``, which traces the
    conic itself.
    """
    basis = _conic_through(points)
    if len(basis) != 1:
        return None
    a = _sym(basis[0])
    if det3(a) == 0:
        return None
    p = [Fraction(x) for x in points[0]]
    # a direction plane complementary to p
    e = [[Fraction(1), 0, 0], [0, Fraction(1), 0], [0, 0, Fraction(1)]]
    dirs = [v for v in e if _independent(p, v)][:2]
    if len(dirs) < 2 or det3([p, dirs[0], dirs[1]]) == 0:
        dirs = [e[0], e[2]] if det3([p, e[0], e[2]]) else [e[1], e[2]]
    s, t = Poly.var("s", SRC), Poly.var("t", SRC)
    d = [(s * dirs[0][i] + t * dirs[1][i]).with_variables(SRC) for i in range(3)]

    def bil(x, y):
        acc = Poly.zero(SRC)
        for i in range(3):
            for j in range(3):
                if a[i][j]:
                    acc = acc + (x[i] if isinstance(x[i], Poly) else Poly.const(x[i], SRC)) * \
                        (y[j] if isinstance(y[j], Poly) else Poly.const(y[j], SRC)) * a[i][j]
        return acc

    qd = bil(d, d)
    bpd = bil(p, d)
    psi = [(qd * p[i] - bpd * d[i] * 2).with_variables(SRC) for i in range(3)]
    ps = [f.diff("s").with_variables(SRC) for f in psi]
    pt = [f.diff("t").with_variables(SRC) for f in psi]
    cross = [ps[1] * pt[2] - ps[2] * pt[1], ps[2] * pt[0] - ps[0] * pt[2], ps[0] * pt[1] - ps[1] * pt[0]]
    try:
        return validate_map(*cross)
    except Exception:
        return None


def structured_candidates(family, params, rng, limit=60):
    """Conics tangent to at least three family lines, plus lines through family intersections."""
    pts = [family.dual_point(*p) for p in params]
    out = []
    seen = set()
    subsets = []
    for size in (5, 4, 3):
        subsets.extend(combinations(range(len(pts)), size))
    rng.shuffle(subsets)
    for sub in subsets:
        if len(out) >= limit:
            break
        chosen = [pts[i] for i in sub]
        while len(chosen) < 5:
            chosen.append([Fraction(rng.randint(-9, 9)) for _ in range(3)])
        f = dual_conic_map(chosen)
        if f is not None and f not in seen:
            seen.add(f)
            out.append(f)
    # lines joining two intersection points of family lines (degree 1 enumeration)
    lines = [family.line(*p) for p in params]
    inter = []
    for g1, g2 in combinations(lines[:6], 2):
        inter.append(_cross_point(line_coeffs(g1), line_coeffs(g2)))
    for p1, p2 in combinations(inter, 2):
        v = _cross_point(p1, p2)
        if not any(v):
            continue
        g = Poly({(1, 0, 0): v[0], (0, 1, 0): v[1], (0, 0, 1): v[2]}, XYZ)
        f = line_map(g)
        if f not in seen:
            seen.add(f)
            out.append(f)
    return out


def _cross_point(a, b):
    return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]


__all__ = [
    "CONTRAPOSITIVE", "EXCEPTIONAL", "FORCED", "HOLDS", "PASS", "VACUOUS", "VIOLATION",
    "CampanaReport", "DosvarReport", "ExceptionalSet", "QuadFamily", "ScenarioReport", "Witness",
    "campana_check", "component_is_integral", "dosvar_order_check", "dual_conic_map",
    "exceptional_components", "exceptional_set_quadfamily", "in_zero_set", "is_campana", "line_map",
    "main_inequality_report", "main_verdict", "noguchi_wang_check", "quad_family_scenario", "sigma",
    "structured_candidates", "validate_witness",
]
