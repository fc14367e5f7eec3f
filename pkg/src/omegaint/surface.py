"""Twisted HS forms on P^2: chart transport, discriminant loci, integrality."""

from __future__ import annotations

from dataclasses import dataclass

from .arith.binary import BinaryForm, P1Point, binary_form_discriminant
from .arith.parse import dvar
from .arith.poly import Poly, poly_lcm, squarefree_part
from .arith.series import TruncatedSeries
from .errors import (
    NotGlobalSection,
    NotReduced,
    PointNotOnCurve,
    SingularBasePoint,
    ZeroForm,
)
from .geometry import (
    CHART_ORDER,
    CHARTS,
    XYZ,
    chart_numerators,
    dehomogenize_to_chart,
    homogenize_from_chart,
)
from .hs import HSForm, hs_pullback, vanishing_order

USER_ALL_CHARTS = "UserAllCharts"
TRANSPORTED = "TransportedFromOne"
_S = "_s"


def _coord_expr(j, chart):
    """``X_j / X_chart`` as a polynomial in the chart coordinates (1 when j is the chart index)."""
    i, names = CHARTS[chart]
    if j == i:
        return Poly.const(1, names)
    js = chart_numerators(chart)
    return Poly.var(names[js.index(j)], names)


def _shifted(x, names, top):
    """``x + sum_p d_p(x) s^p`` for a polynomial ``x`` in the chart coordinates."""
    out = x
    for y in names:
        if x.degree(y) < 1:
            continue
        for p in range(1, top + 1):
            out = out + Poly.var(dvar(p, y)) * Poly.var(_S) ** p
    return out


def chart_transport(form, source, target, twist):
    """Express a form given on chart ``source`` on chart ``target``.

    Returns ``(form on target, e)`` where ``e`` is the exponent of the
    denominator ``c = X_source / X_target`` that had to be cleared.  The
    twist supplies the factor ``c^twist``; ``e > twist`` means the form is not
    a global section of ``O(twist)``.
    """
    if source == target:
        return form, 0
    m, r = form.m, form.r
    i_a, names_a = CHARTS[source]
    names_b = CHARTS[target][1]
    c = _coord_expr(i_a, target)
    cname = c.used_variables()[0]
    nums = [_coord_expr(j, target) for j in chart_numerators(source)]
    # N[p][l] = c^(p+1) * d_p(num_l / c), via 1/(c + h) = sum_j (-h)^j / c^(j+1)
    hc = _shifted(c, names_b, m) - c
    n_tab = {}
    for l, num in enumerate(nums):
        shifted = _shifted(num, names_b, m)
        for p in range(1, m + 1):
            acc = Poly.zero()
            for j in range(p + 1):
                acc = acc + (-hc) ** j * c ** (p - j)
            coeff = (shifted * acc).coefficients_in(_S).get(p)
            n_tab[(p, l)] = coeff if coeff is not None else Poly.zero()
    n = len(names_a)
    terms = []
    for e, g in form.coeffs.items():
        g = g.with_variables(names_a)
        delta = int(g.total_degree())
        gt = Poly.zero()
        for ge, gc in g.terms.items():
            mono = Poly.const(gc)
            for l, k in enumerate(ge):
                if k:
                    mono = mono * nums[l] ** k
            gt = gt + mono * c ** (delta - sum(ge))
        own = delta
        for idx, h in enumerate(e):
            if h:
                p, l = idx // n + 1, idx % n
                gt = gt * n_tab[(p, l)] ** h
                own += h * (p + 1)
        terms.append((gt, own))
    if not terms:
        return HSForm(m, r, names_b), 0
    top = max(own for _, own in terms)
    total = Poly.zero()
    for gt, own in terms:
        total = total + gt * c ** (top - own)
    if total.is_zero():
        return HSForm(m, r, names_b), 0
    low = int(total.min_degree(cname))
    e = top - low
    if e > twist:
        raise NotGlobalSection(
            f"transport {source}->{target} needs {cname}^{e} but the twist is {twist}")
    cleared = total.exact_div(c ** low) if low else total
    result = cleared * c ** (twist - e)
    return HSForm.from_poly(result, names_b, m, r), e


class FormOnP2:
    """A global section of ``O(k) (x) (HS^m)_r`` on P^2, given on all three charts."""

    __slots__ = ("m", "r", "k", "charts", "provenance", "primary", "clearing")

    def __init__(self, m, r, k, charts, provenance, primary, clearing=None):
        self.m, self.r, self.k = m, r, k
        self.charts = dict(charts)
        self.provenance = provenance
        self.primary = primary
        self.clearing = dict(clearing or {})

    @classmethod
    def from_chart(cls, chart, expr, m, r=None, k=0):
        names = CHARTS[chart][1]
        base = expr if isinstance(expr, HSForm) else HSForm.parse(expr, names, m, r)
        if base.coords != names:
            raise ValueError(f"chart {chart} uses coordinates {names}")
        r = base.r if r is None else r
        charts, clearing = {}, {}
        for c in CHART_ORDER:
            charts[c], clearing[c] = chart_transport(base, chart, c, k)
        return cls(m, r, k, charts, TRANSPORTED, chart, clearing)

    @classmethod
    def from_all_charts(cls, exprs, m, r=None, k=0):
        """Forms supplied on every chart; compatibility is checked exactly."""
        given = {}
        for c, e in exprs.items():
            given[c] = e if isinstance(e, HSForm) else HSForm.parse(e, CHARTS[c][1], m, r)
        primary = next(c for c in CHART_ORDER if c in given)
        built = cls.from_chart(primary, given[primary], m, r, k)
        for c, f in given.items():
            if built.charts[c] != f:
                raise ValueError(f"chart expressions on {primary} and {c} are not compatible")
        built.provenance = USER_ALL_CHARTS if len(given) == 3 else TRANSPORTED
        return built

    def chart(self, name):
        return self.charts[name]

    def is_zero(self):
        return self.charts[self.primary].is_zero()

    def __eq__(self, other):
        return (isinstance(other, FormOnP2) and (self.m, self.r, self.k) == (other.m, other.r, other.k)
                and self.charts == other.charts)

    def __hash__(self):
        return hash((self.m, self.r, self.k, str(self.charts[self.primary])))

    def __repr__(self):
        return f"FormOnP2(m={self.m}, r={self.r}, k={self.k}, {self.primary}: {self.charts[self.primary]})"


# -- symmetric forms: symbol, reducedness, discriminant ------------------------------------

def symbol_form(form, chart):
    """The binary form ``K`` in ``(d x, d y)`` with polynomial coefficients on a chart."""
    if form.m != 1:
        raise ValueError("the symbol form is defined for symmetric forms (m = 1)")
    f = form.charts[chart]
    names = f.coords
    coeffs = [f.coeffs.get((form.r - j, j), Poly.zero(names)) for j in range(form.r + 1)]
    return BinaryForm([c if isinstance(c, Poly) else Poly.const(c, names) for c in coeffs])


def chart_delta(form, chart):
    delta = binary_form_discriminant(symbol_form(form, chart))
    if not isinstance(delta, Poly):
        delta = Poly.const(delta, CHARTS[chart][1])
    return delta.with_variables(CHARTS[chart][1])


def is_reduced(form):
    if form.is_zero():
        raise ZeroForm("the zero form has no discriminant")
    return not chart_delta(form, form.primary).is_zero()


@dataclass(frozen=True)
class DiscriminantLocus:
    polynomial: Poly
    per_chart: tuple

    def chart(self, name):
        return dict(self.per_chart)[name]

    def is_empty(self):
        return self.polynomial.is_constant()

    def contains(self, point):
        return self.polynomial.evaluate(dict(zip(XYZ, point))) == 0

    def __str__(self):
        return str(self.polynomial)


def _associate(a, b):
    if a.is_constant() and b.is_constant():
        return not a.is_zero() and not b.is_zero()
    return a.primitive() == b.primitive()


def discriminant_locus(form):
    """``Delta(omega)`` as one squarefree homogeneous polynomial, glued from the charts."""
    if form.is_zero():
        raise ZeroForm("the zero form has no discriminant")
    deltas = {}
    glued = Poly.const(1, XYZ)
    for c in CHART_ORDER:
        d = chart_delta(form, c)
        if d.is_zero():
            raise NotReduced(f"the symbol form is not squarefree on {c}")
        deltas[c] = d
        if not d.is_constant():
            h = homogenize_from_chart(squarefree_part(d), c)
            glued = poly_lcm(glued, h)
    glued = squarefree_part(glued).with_variables(XYZ) if not glued.is_constant() else Poly.const(1, XYZ)
    for c, d in deltas.items():
        local = dehomogenize_to_chart(glued, c)
        expect = squarefree_part(d) if not d.is_constant() else Poly.const(1, d.variables)
        if not _associate(local, expect):
            raise AssertionError(f"discriminant charts do not glue on {c}")
    return DiscriminantLocus(glued, tuple(deltas.items()))


# -- integrality ------------------------------------------------------------------------------

def pullback_along(form, phi, q=None):
    """Pull ``form`` back along ``phi``.

    Returns ``(F, chart, point)``: the form over k(t), the chart used, and
    the affine value of ``q`` in the source coordinate used (``None`` when
    ``q`` is not given).  At ``q = [0:1]`` the source coordinate is ``s/t``.
    """
    if q is not None and not isinstance(q, P1Point):
        q = P1Point(*q) if isinstance(q, tuple) else P1Point(q)
    chart = phi.chart_at(q)
    at_inf = q is not None and q.is_infinite
    param = phi.affine_param(chart, at_infinity=at_inf)
    f = hs_pullback(form.charts[chart], param)
    point = None if q is None else (0 if at_inf else q.t)
    return f, chart, point


def order_along(form, phi, q):
    f, _, point = pullback_along(form, phi, q)
    return vanishing_order(f, point)


def is_integral_parametrized(form, phi):
    f, _, _ = pullback_along(form, phi)
    return f.is_zero()


@dataclass(frozen=True)
class ImplicitVerdict:
    integral: bool
    order: int

    def __str__(self):
        if self.integral:
            return f"IntegralUpToOrder({self.order})"
        return f"NotIntegral({self.order})"


def implicit_branch(g, point, n):
    """Smooth branch of ``g = 0`` through ``point`` as series in a local parameter.

    ``g`` is a polynomial in the two chart coordinates.  Returns the two
    coordinate series (one of them is ``x0 + tau``).
    """
    names = g.variables
    x, y = names
    vals = dict(zip(names, point))
    if g.evaluate(vals) != 0:
        raise PointNotOnCurve(f"{point} is not on {{{g} = 0}}")
    gx, gy = g.diff(x).evaluate(vals), g.diff(y).evaluate(vals)
    if gx == 0 and gy == 0:
        raise SingularBasePoint(f"{{{g} = 0}} is singular at {point}")
    free, dep = (x, y) if gy != 0 else (y, x)
    deriv = g.diff(dep)
    one = TruncatedSeries.one(n, "tau")
    tau = TruncatedSeries.x(n, "tau")
    base = tau + vals[free]
    cur = TruncatedSeries.const(vals[dep], n, "tau")
    k = 1
    while True:
        env = {free: base, dep: cur}
        num = g.evaluate(env, one)
        if num.is_zero():
            break
        cur = cur - num / deriv.evaluate(env, one)
        if k > n + 1:
            break
        k *= 2
    return {free: base, dep: cur}


def is_integral_implicit(form, g, point, n, chart=None):
    """Bounded integrality test of ``{G = 0}`` at a smooth chart point.

    The branch is computed to order ``n + m`` so that the pulled-back
    coefficients are exact up to ``tau^n``.  ``IntegralUpToOrder(n)`` is a
    certificate only to that order.
    """
    chart = chart or form.primary
    names = CHARTS[chart][1]
    if isinstance(g, str):
        from .arith.parse import parse_poly

        g = parse_poly(g, XYZ)
    local = dehomogenize_to_chart(g, chart) if set(g.used_variables()) <= set(XYZ) else g.with_variables(names)
    branch = implicit_branch(local, tuple(point), n + form.m + 1)
    f = hs_pullback(form.charts[chart], branch)
    worst = None
    for c in f.coeffs.values():
        v = c.truncate(n).valuation()
        if v is not None and (worst is None or v < worst):
            worst = v
    if worst is None:
        return ImplicitVerdict(True, n)
    return ImplicitVerdict(False, worst)
