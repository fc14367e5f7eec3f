"""Rational maps P^1 -> P^2, plane divisors, heights and counting functions."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm

from .arith import univariate as U
from .arith.binary import INFINITY, P1Point, ord_at, roots
from .arith.parse import parse_poly
from .arith.poly import Poly, is_squarefree, poly_gcd
from .arith.ratfunc import RatFunc
from .errors import ConstantMap, ImageInDivisor, ImageOutsideChart, UnequalDegrees

SRC = ("s", "t")
XYZ = ("X", "Y", "Z")
GENUS = 0  # every source curve here is P^1

# chart name -> (index of the nonvanishing coordinate, affine coordinate names)
CHARTS = {
    "UX": (0, ("u", "v")),
    "UY": (1, ("a", "b")),
    "UZ": (2, ("p", "q")),
}
CHART_ORDER = ("UX", "UY", "UZ")


def chart_numerators(chart):
    """Indices of the homogeneous coordinates that give the chart's affine coordinates."""
    i = CHARTS[chart][0]
    return tuple(j for j in range(3) if j != i)


def dehomogenize_to_chart(g, chart):
    """Restrict a homogeneous polynomial in X, Y, Z to a chart."""
    i, names = CHARTS[chart]
    g = g.with_variables(XYZ) if set(g.used_variables()) <= set(XYZ) else g
    js = chart_numerators(chart)
    mapping = {XYZ[i]: 1, XYZ[js[0]]: Poly.var(names[0], names), XYZ[js[1]]: Poly.var(names[1], names)}
    return g.subs(mapping).with_variables(names)


def homogenize_from_chart(f, chart, degree=None):
    i, names = CHARTS[chart]
    js = chart_numerators(chart)
    h = f.with_variables(names).homogenize(XYZ[i], degree)
    h = h.rename({names[0]: XYZ[js[0]], names[1]: XYZ[js[1]]})
    return h.with_variables(XYZ)


def _as_binary(f):
    if isinstance(f, str):
        f = parse_poly(f, SRC)
    if not isinstance(f, Poly):
        f = Poly.const(f, SRC)
    return f.with_variables(SRC)


class RationalMap:
    """A map ``[F0:F1:F2]`` from P^1 to P^2 by coprime binary forms of degree d."""

    __slots__ = ("coords", "degree")

    def __init__(self, f0, f1, f2, _checked=False):
        fs = tuple(_as_binary(f) for f in (f0, f1, f2))
        if not _checked:
            fs, _ = _normalize(fs)
        self.coords = fs
        self.degree = int(max(f.total_degree() for f in fs))

    @classmethod
    def parse(cls, texts):
        return validate_map(*texts)

    def __eq__(self, other):
        return isinstance(other, RationalMap) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __str__(self):
        return "[" + " : ".join(str(f) for f in self.coords) + "]"

    __repr__ = __str__

    def pullback(self, g):
        """``G(F0, F1, F2)`` for a homogeneous polynomial G in X, Y, Z."""
        if isinstance(g, str):
            g = parse_poly(g, XYZ)
        return g.with_variables(XYZ).evaluate(dict(zip(XYZ, self.coords)), Poly.const(1, SRC))

    def at(self, q):
        if not isinstance(q, P1Point):
            q = P1Point(*q) if isinstance(q, tuple) else P1Point(q)
        vals = {"s": q.s, "t": q.t}
        return tuple(f.evaluate(vals) for f in self.coords)

    def compose(self, rho):
        """``self o rho`` for a self-map ``rho = (R0, R1)`` of P^1."""
        r0, r1 = (_as_binary(r) for r in rho)
        vals = {"s": r0, "t": r1}
        fs = [f.evaluate(vals, Poly.const(1, SRC)) for f in self.coords]
        return validate_map(*fs)

    def is_line(self):
        """True iff the image is contained in a line (coordinate forms linearly dependent)."""
        return _rank([_coeff_vector(f, self.degree) for f in self.coords]) <= 2

    def affine_param(self, chart, at_infinity=False):
        """Chart coordinates as rational functions of the source coordinate.

        The source coordinate is ``t/s`` (named ``t``), or ``s/t`` when
        ``at_infinity`` is set so that [0:1] becomes the origin.
        """
        i, names = CHARTS[chart]
        dense = [_dehom(f, at_infinity) for f in self.coords]
        if not dense[i]:
            raise ImageOutsideChart(f"the image lies in the complement of {chart}")
        js = chart_numerators(chart)
        return {names[k]: RatFunc(dense[j], dense[i], "t") for k, j in enumerate(js)}

    def chart_at(self, q=None):
        """A chart containing the image of ``q`` (or the generic image point)."""
        if q is None:
            for c in CHART_ORDER:
                if not self.coords[CHARTS[c][0]].is_zero():
                    return c
        else:
            vals = self.at(q)
            for c in CHART_ORDER:
                if vals[CHARTS[c][0]]:
                    return c
        raise ImageOutsideChart("no chart contains the image")


def _dehom(f, at_infinity):
    d = int(f.total_degree()) if f.terms else 0
    out = [Fraction(0)] * (d + 1)
    for (a, b), c in f.terms.items():
        out[a if at_infinity else b] = c
    return U.trim(out)


def _coeff_vector(f, d):
    return [f.coefficient({"s": d - j, "t": j}) for j in range(d + 1)]


def _rank(rows):
    m = [list(map(Fraction, r)) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _normalize(fs):
    nonzero = [f for f in fs if not f.is_zero()]
    if not nonzero:
        raise ConstantMap("all coordinates vanish")
    for f in nonzero:
        if not f.is_homogeneous():
            raise UnequalDegrees(f"not homogeneous: {f}")
    degs = {f.total_degree() for f in nonzero}
    if len(degs) > 1:
        raise UnequalDegrees(f"coordinate degrees differ: {sorted(degs)}")
    g = nonzero[0]
    for f in nonzero[1:]:
        g = poly_gcd(g, f)
    removed = None
    if not g.is_constant():
        removed = g
        fs = tuple(f.exact_div(g).with_variables(SRC) if not f.is_zero() else f for f in fs)
    # scale to coprime integer coefficients with a positive leading entry
    den, num = 1, 0
    for f in fs:
        for c in f.terms.values():
            den = lcm(den, c.denominator)
    for f in fs:
        for c in f.terms.values():
            num = gcd(num, int(c * den))
    scale = Fraction(den, num)
    if next(f for f in fs if not f.is_zero()).leading_coefficient_grevlex() < 0:
        scale = -scale
    fs = tuple((f * scale).with_variables(SRC) for f in fs)
    d = max(f.total_degree() for f in fs)
    if d < 1 or _rank([_coeff_vector(f, int(d)) for f in fs]) <= 1:
        raise ConstantMap("the map is constant")
    return fs, removed


def validate_map(f0, f1, f2, quiet=False):
    """Build a :class:`RationalMap`, removing (with a warning) any common factor."""
    fs = tuple(_as_binary(f) for f in (f0, f1, f2))
    fs, removed = _normalize(fs)
    if removed is not None and not quiet:
        warnings.warn(f"removed common factor {removed} from the map", stacklevel=2)
    return RationalMap(*fs, _checked=True)


# -- divisors ------------------------------------------------------------------------

VERIFIED_LINES = "VerifiedLines"
VERIFIED_TANGENCY = "VerifiedTangency"
ASSUMED = "Assumed"
SNC_STATUSES = (VERIFIED_LINES, VERIFIED_TANGENCY, ASSUMED)


def _as_xyz(g):
    if isinstance(g, str):
        g = parse_poly(g, XYZ)
    return g.with_variables(XYZ)


def line_coeffs(g):
    g = _as_xyz(g)
    return [g.coefficient({v: 1}) for v in XYZ]


def _conic_matrix(g):
    m = [[Fraction(0)] * 3 for _ in range(3)]
    for i, a in enumerate(XYZ):
        for j, b in enumerate(XYZ):
            if i == j:
                m[i][i] = g.coefficient({a: 2})
            else:
                m[i][j] = g.coefficient({a: 1, b: 1}) / 2
    return m


def lines_snc(lines):
    """Pairwise independent and no three concurrent."""
    vecs = [line_coeffs(g) for g in lines]
    for a, b in combinations(vecs, 2):
        if _rank([a, b]) < 2:
            return False
    for a, b, c in combinations(vecs, 3):
        if det3([a, b, c]) == 0:
            return False
    return True


def _line_meets_conic_transversally(line, conic):
    # restrict the conic to the line and ask for two distinct intersection points
    a = line_coeffs(line)
    j = next(i for i in range(3) if a[i])
    others = [i for i in range(3) if i != j]
    s, t = Poly.var("s", SRC), Poly.var("t", SRC)
    pt = [None] * 3
    pt[others[0]], pt[others[1]] = s, t
    pt[j] = (s * (-a[others[0]]) + t * (-a[others[1]])) / a[j]
    r = conic.evaluate(dict(zip(XYZ, pt)), Poly.const(1, SRC))
    if r.is_zero():
        return False
    c = [r.coefficient({"s": 2 - k, "t": k}) for k in range(3)]
    return c[1] ** 2 - 4 * c[0] * c[2] != 0


@dataclass(frozen=True)
class PlaneDivisor:
    """``sum n_i D_i`` with squarefree homogeneous components ``G_i``."""

    components: tuple
    multiplicities: tuple
    snc_status: str = ASSUMED
    labels: tuple = field(default=(), compare=False)

    def __init__(self, components, multiplicities=None, snc_status=None, labels=None):
        comps = tuple(_as_xyz(g) for g in components)
        mults = tuple(multiplicities) if multiplicities is not None else (1,) * len(comps)
        if len(mults) != len(comps) or any(int(n) != n or n < 1 for n in mults):
            raise ValueError("multiplicities must be positive integers, one per component")
        for g in comps:
            if g.is_zero() or g.is_constant():
                raise ValueError("divisor components must be non-constant")
            if not g.is_homogeneous():
                raise ValueError(f"component {g} is not homogeneous")
            if not is_squarefree(g):
                raise ValueError(f"component {g} is not squarefree")
            if g.total_degree() == 2 and det3(_conic_matrix(g)) == 0:
                raise ValueError(f"component {g} is a degenerate conic")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "multiplicities", tuple(int(n) for n in mults))
        object.__setattr__(self, "labels", tuple(labels) if labels else tuple(str(g) for g in comps))
        status = snc_status or self.best_snc_status()
        if status not in SNC_STATUSES:
            raise ValueError(f"unknown SNC status {status!r}")
        if status == VERIFIED_LINES and not self._lines_ok():
            raise ValueError("components are not lines in general position")
        if status == VERIFIED_TANGENCY and not self._tangency_ok():
            raise ValueError("line/conic configuration is not transversal")
        object.__setattr__(self, "snc_status", status)

    def _lines_ok(self):
        return all(g.total_degree() == 1 for g in self.components) and lines_snc(self.components)

    def _tangency_ok(self):
        lines = [g for g in self.components if g.total_degree() == 1]
        conics = [g for g in self.components if g.total_degree() == 2]
        if len(lines) + len(conics) != len(self.components) or len(conics) != 1:
            return False
        if not lines_snc(lines):
            return False
        conic = conics[0]
        if not all(_line_meets_conic_transversally(g, conic) for g in lines):
            return False
        # no two lines may meet on the conic
        for a, b in combinations(lines, 2):
            p = _cross(line_coeffs(a), line_coeffs(b))
            if conic.evaluate(dict(zip(XYZ, p))) == 0:
                return False
        return True

    def best_snc_status(self):
        if self._lines_ok():
            return VERIFIED_LINES
        if self._tangency_ok():
            return VERIFIED_TANGENCY
        return ASSUMED

    def degree(self):
        return sum(n * int(g.total_degree()) for g, n in zip(self.components, self.multiplicities))

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(zip(self.components, self.multiplicities))


def _cross(a, b):
    return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]


# -- orders, heights, counting ----------------------------------------------------------

@dataclass(frozen=True)
class OrderRow:
    """Intersection data of one component with a map.

    ``orders`` maps rational points of P^1 to their order; ``residual`` holds
    ``(degree, order)`` blocks of conjugate irrational points.
    """

    component: Poly
    orders: tuple
    residual: tuple
    total: int

    def as_dict(self):
        return dict(self.orders)

    def rational_total(self):
        return sum(c for _, c in self.orders)

    def residual_degree(self):
        return sum(e * c for e, c in self.residual)


@dataclass(frozen=True)
class OrderProfile:
    rows: tuple

    def points(self):
        """``{Q: [(component index, order), ...]}`` over rational points."""
        out = {}
        for i, row in enumerate(self.rows):
            for q, c in row.orders:
                out.setdefault(q, []).append((i, c))
        return out


def vanishing_orders(phi, g):
    """Orders of ``phi^* G`` at every point, for one component ``G``."""
    g = _as_xyz(g)
    pb = phi.pullback(g)
    if pb.is_zero():
        raise ImageInDivisor(f"the image of {phi} lies in {{{g} = 0}}")
    orders, residual = roots(pb, SRC)
    items = tuple(sorted(orders.items(), key=lambda kv: kv[0].sort_key()))
    return OrderRow(g, items, residual, int(pb.total_degree()))


def order_profile(phi, divisor):
    return OrderProfile(tuple(vanishing_orders(phi, g) for g in divisor.components))


def height(phi, target):
    """``deg(D) * d`` for a divisor, or ``k * d`` for the twist ``O(k)``."""
    if isinstance(target, PlaneDivisor):
        for g in target.components:
            if phi.pullback(g).is_zero():
                raise ImageInDivisor(f"the image of {phi} lies in {{{g} = 0}}")
        return target.degree() * phi.degree
    return int(target) * phi.degree


def counting_row(row, n, mult=1):
    """Truncated count for one component of multiplicity ``mult``."""
    total = sum(min(n, mult * c) for _, c in row.orders)
    total += sum(e * min(n, mult * c) for e, c in row.residual)
    return total


def truncated_counting(phi, divisor, n):
    """``N^(n)(D, phi) = sum_i sum_Q min(n, n_i * c_iQ)``; conjugate blocks count by degree."""
    if not isinstance(divisor, PlaneDivisor):
        divisor = PlaneDivisor([divisor])
    return sum(counting_row(vanishing_orders(phi, g), n, k) for g, k in divisor)


# -- self-maps of P^1 --------------------------------------------------------------------

def _as_pair(rho):
    r0, r1 = (_as_binary(r) for r in rho)
    if r0.is_zero() and r1.is_zero():
        raise ConstantMap("zero self-map")
    return r0, r1


def ramification_factor(rho, q):
    """Ramification index of ``rho = [R0:R1]`` at ``q``."""
    r0, r1 = _as_pair(rho)
    g = poly_gcd(r0, r1) if not (r0.is_zero() or r1.is_zero()) else None
    if g is not None and not g.is_constant():
        r0, r1 = r0.exact_div(g).with_variables(SRC), r1.exact_div(g).with_variables(SRC)
    if not isinstance(q, P1Point):
        q = P1Point(*q) if isinstance(q, tuple) else P1Point(q)
    vals = {"s": q.s, "t": q.t}
    a, b = r0.evaluate(vals), r1.evaluate(vals)
    local = (r0 * b - r1 * a).with_variables(SRC)
    if local.is_zero():
        raise ConstantMap("the self-map is constant")
    return ord_at(local, q)


def jacobian(rho):
    r0, r1 = _as_pair(rho)
    return (r0.diff("s") * r1.diff("t") - r0.diff("t") * r1.diff("s")).with_variables(SRC)


def ramification_points(rho):
    """Rational ramification points with their indices, plus the irrational residue."""
    orders, residual = roots(jacobian(rho), SRC)
    return {q: ramification_factor(rho, q) for q in orders}, residual


def moebius(a, b, c, d):
    """The automorphism ``[s:t] -> [a s + b t : c s + d t]``."""
    if a * d - b * c == 0:
        raise ValueError("singular Moebius matrix")
    s, t = Poly.var("s", SRC), Poly.var("t", SRC)
    return ((s * a + t * b).with_variables(SRC), (s * c + t * d).with_variables(SRC))


__all__ = [
    "ASSUMED", "CHARTS", "CHART_ORDER", "GENUS", "INFINITY", "OrderProfile", "OrderRow",
    "PlaneDivisor", "RationalMap", "VERIFIED_LINES", "VERIFIED_TANGENCY", "XYZ", "SRC",
    "counting_row", "dehomogenize_to_chart", "height", "homogenize_from_chart", "jacobian",
    "line_coeffs", "lines_snc", "moebius", "order_profile", "ramification_factor",
    "ramification_points", "truncated_counting", "validate_map", "vanishing_orders",
]
