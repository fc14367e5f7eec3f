"""Local branches of integral curves through a point off the discriminant.

At a chart point P with delta(P) != 0 the symbol form ``K(x, y; dx, dy)``
splits near P into factors lifted from the factorisation of ``K(P)`` over Q.
Each rational linear factor ``B dx + C dy`` is lifted degree by degree in
``(x, y)`` (Hensel) and integrated as ``y' = -B/C`` (or the swapped
equation) to give a branch series.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith.binary import BinaryForm, linear_factors
from .arith.poly import Poly, format_scalar
from .arith.series import TruncatedSeries
from .errors import PointOnDiscriminant
from .geometry import CHARTS
from .surface import chart_delta, symbol_form

LOCAL = ("x", "y")


@dataclass(frozen=True)
class Branch:
    """One rational branch: ``dependent = series(parameter)`` around the base point."""

    factor: tuple          # (b, c) for the tangent factor b*dx + c*dy at P
    parameter: str         # local coordinate used as parameter ("x" or "y")
    series: TruncatedSeries
    annihilation: object   # first nonvanishing order of omega on the branch, None if zero to `order`

    @property
    def annihilates(self):
        return self.annihilation is None

    def tangent(self):
        b, c = self.factor
        return (c, -b)


@dataclass(frozen=True)
class BranchReport:
    point: tuple
    chart: str
    rational_factors: tuple   # ((b, c), multiplicity)
    irrational: tuple         # (degree, multiplicity)
    branches: tuple
    transversal: bool
    hensel_ok: bool
    order: int

    def total_multiplicity(self):
        return sum(k for _, k in self.rational_factors) + sum(e * k for e, k in self.irrational)

    def branch_text(self, br, names):
        """The branch in chart coordinates, e.g. ``v = -1 - u + O(u^13)``."""
        i = 0 if br.parameter == "x" else 1
        free, dep = names[i], names[1 - i]
        c0 = self.point[i]
        var = free if c0 == 0 else f"({free} {'-' if c0 > 0 else '+'} {format_scalar(abs(c0))})"
        coeffs = list(br.series.coeffs)
        coeffs[0] += self.point[1 - i]
        return f"{dep} = {TruncatedSeries(coeffs, br.series.order, var)}"

    def lines(self):
        pt = ", ".join(format_scalar(c) for c in self.point)
        out = [f"point ({pt}) on {self.chart}: {len(self.branches)} rational branch(es), "
               f"{sum(e * k for e, k in self.irrational)} irrational factor(s) counted"]
        names = CHARTS[self.chart][1]
        for br in self.branches:
            if br.annihilation is None:
                note = f"annihilates omega to order {self.order}"
            else:
                note = f"omega nonzero at order {br.annihilation}"
            out.append(f"  {self.branch_text(br, names)}  [{note}]")
        out.append(f"  hensel product check: {'ok' if self.hensel_ok else 'FAILED'}")
        out.append(f"  transversal: {'yes' if self.transversal else 'no'}")
        return out


def _shifted_symbol(form, chart, point):
    """Symbol coefficients as polynomials in local coordinates centred at ``point``."""
    names = CHARTS[chart][1]
    k = symbol_form(form, chart)
    xs = Poly.var("x", LOCAL) + point[0]
    ys = Poly.var("y", LOCAL) + point[1]
    one = Poly.const(1, LOCAL)
    return [c.with_variables(names).evaluate({names[0]: xs, names[1]: ys}, one) for c in k.coeffs]


def _solve(matrix, rhs):
    n = len(matrix)
    a = [list(row) + [b] for row, b in zip(matrix, rhs)]
    cols = len(matrix[0])
    piv_cols = []
    r = 0
    for col in range(cols):
        piv = next((i for i in range(r, n) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][col]
        a[r] = [v * inv for v in a[r]]
        for i in range(n):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        piv_cols.append(col)
        r += 1
    for i in range(r, n):
        if a[i][-1]:
            raise ArithmeticError("inconsistent Hensel system")
    sol = [Fraction(0)] * cols
    for i, col in enumerate(piv_cols):
        sol[col] = a[i][-1]
    return sol


def _bf_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def hensel_lift(coeffs, factors0, order):
    """Lift ``K(0) = prod factors0`` to ``K = prod F_i`` modulo ``(x, y)^(order+1)``.

    ``coeffs`` are the symbol coefficients ``A_j(x, y)``; ``factors0`` are
    constant binary forms (coefficient lists, highest dx power first) whose
    product is ``K(0, 0)``.  A factor flagged in ``fixed`` keeps one
    coefficient constant to remove the scaling freedom.  Returns the lifted
    factors as dicts ``{(a, b): coefficient list}`` of x^a y^b pieces.
    """
    degs = [len(f) - 1 for f in factors0]
    r = sum(degs)
    # normalise all but the last factor at one nonzero coefficient
    fixed = []
    for i, f in enumerate(factors0):
        if i == len(factors0) - 1:
            fixed.append(None)
        else:
            fixed.append(max(j for j, c in enumerate(f) if c))
    # unknown layout
    slots = []
    for i, d in enumerate(degs):
        for j in range(d + 1):
            if j != fixed[i]:
                slots.append((i, j))
    matrix = [[Fraction(0)] * len(slots) for _ in range(r + 1)]
    for col, (i, j) in enumerate(slots):
        other = [Fraction(1)]
        for k, f in enumerate(factors0):
            if k != i:
                other = _bf_mul(other, f)
        unit = [Fraction(0)] * (degs[i] + 1)
        unit[j] = Fraction(1)
        for row, v in enumerate(_bf_mul(unit, other)):
            matrix[row][col] = v
    lifted = [{(0, 0): list(map(Fraction, f))} for f in factors0]
    target = {}
    for j, a in enumerate(coeffs):
        for (ex, ey), c in a.with_variables(LOCAL).terms.items():
            target.setdefault((ex, ey), [Fraction(0)] * (r + 1))[j] += c
    for d in range(1, order + 1):
        prod = _pieces_product(lifted, d)
        for a in range(d + 1):
            key = (a, d - a)
            want = target.get(key, [Fraction(0)] * (r + 1))
            have = prod.get(key, [Fraction(0)] * (r + 1))
            rhs = [w - h for w, h in zip(want, have)]
            if not any(rhs):
                continue
            sol = _solve(matrix, rhs)
            for (i, j), v in zip(slots, sol):
                if v:
                    piece = lifted[i].setdefault(key, [Fraction(0)] * (degs[i] + 1))
                    piece[j] += v
    return lifted


def _hensel_check(lifted, coeffs, order):
    """Product of the lifted factors equals K modulo (x, y)^(order+1)."""
    prod = _pieces_product(lifted, order)
    r = len(coeffs) - 1
    want = {}
    for j, a in enumerate(coeffs):
        for e, c in a.with_variables(LOCAL).terms.items():
            if sum(e) <= order:
                want.setdefault(e, [Fraction(0)] * (r + 1))[j] += c
    keys = set(prod) | set(want)
    zero = [Fraction(0)] * (r + 1)
    return all(prod.get(k, zero) == want.get(k, zero) for k in keys)


def _linear_parts(pieces):
    bpoly = Poly({k: cs[0] for k, cs in pieces.items() if cs[0]}, LOCAL)
    cpoly = Poly({k: cs[1] for k, cs in pieces.items() if cs[1]}, LOCAL)
    return bpoly, cpoly


def _eval_on_branch(poly, param, dep, one):
    """``poly(param, dep(param))`` grouping by powers of the dependent variable."""
    other = "y" if param == "x" else "x"
    n = dep.order
    acc = TruncatedSeries.const(0, n, param)
    power = one
    groups = poly.with_variables(LOCAL).coefficients_in(other)
    for k in range(max(groups, default=-1) + 1):
        if k:
            power = power * dep
        g = groups.get(k)
        if g is None or g.is_zero():
            continue
        acc = acc + power * TruncatedSeries(g.to_dense(param) if not g.is_constant() else [g.constant_value()], n, param)
    return acc


def _pieces_product(lifted, order):
    prod = {(0, 0): [Fraction(1)]}
    for f in lifted:
        nxt = {}
        for (a1, b1), p in prod.items():
            for (a2, b2), q in f.items():
                if a1 + b1 + a2 + b2 > order:
                    continue
                key = (a1 + a2, b1 + b2)
                v = _bf_mul(p, q)
                if key in nxt:
                    nxt[key] = [x + y for x, y in zip(nxt[key], v)]
                else:
                    nxt[key] = v
        prod = nxt
    return prod


def _branch_series(bpoly, cpoly, order):
    """Solve ``B + C y' = 0`` (or ``B x' + C = 0`` when C(0) = 0) by Picard iteration."""
    n = order + 1
    if cpoly.constant_value():
        param, num, den = "x", bpoly, cpoly
    else:
        param, num, den = "y", cpoly, bpoly
    dep = TruncatedSeries.const(0, n, param)
    one = TruncatedSeries.one(n, param)
    for _ in range(n + 1):
        rhs = -(_eval_on_branch(num, param, dep, one) / _eval_on_branch(den, param, dep, one))
        new = rhs.truncate(n - 1).integrate(0)
        if new == dep:
            break
        dep = new
    return param, dep


def _annihilation(coeffs, param, dep, order):
    """First nonzero order of ``sum A_j dx^(r-j) dy^j`` on the branch, or ``None``."""
    one = TruncatedSeries.one(dep.order, param)
    slope = dep.deriv()
    r = len(coeffs) - 1
    total = TruncatedSeries.const(0, slope.order, param)
    for j, a in enumerate(coeffs):
        val = _eval_on_branch(a, param, dep, one)
        # along the branch (dx, dy) = (1, slope) or (slope, 1)
        if param == "x":
            total = total + val * slope ** j
        else:
            total = total + val * slope ** (r - j)
    return total.truncate(order).valuation()


def local_branches(form, point, order=12, chart=None):
    """Branch analysis of a symmetric form at a chart point off the discriminant."""
    chart = chart or form.primary
    names = CHARTS[chart][1]
    point = tuple(Fraction(c) for c in point)
    delta = chart_delta(form, chart)
    if delta.evaluate(dict(zip(names, point))) == 0:
        raise PointOnDiscriminant(f"{point} lies on the discriminant locus")
    coeffs = _shifted_symbol(form, chart, point)
    k0 = BinaryForm([c.constant_value() for c in coeffs])
    factors, irrational = linear_factors(k0)
    # normalised linear factors; the cofactor carries the leading constant
    lin = []
    for (b, c), mult in factors:
        lin.append([Fraction(1), c / b] if c == 0 else [b / c, Fraction(1)])
    rest = list(k0.coeffs)
    for f in lin:
        rest = _divide_binary(rest, f)
    factors0 = lin + [rest]
    lifted = hensel_lift(coeffs, factors0, order)
    hensel_ok = _hensel_check(lifted, coeffs, order)
    branches = []
    for (bc, _), pieces in zip(factors, lifted):
        bpoly, cpoly = _linear_parts(pieces)
        param, dep = _branch_series(bpoly, cpoly, order)
        ann = _annihilation(coeffs, param, dep, order)
        branches.append(Branch(bc, param, dep.truncate(order), ann))
    tangents = [b.tangent() for b in branches]
    distinct = all(t1[0] * t2[1] != t1[1] * t2[0] for i, t1 in enumerate(tangents) for t2 in tangents[i + 1:])
    simple = all(k == 1 for _, k in factors) and all(k == 1 for _, k in irrational)
    return BranchReport(point, chart, tuple(factors), tuple(irrational), tuple(branches),
                        distinct and simple, hensel_ok, order)


def _divide_binary(a, b):
    """Exact quotient of binary forms given as coefficient lists (highest first power of dx)."""
    a = list(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    # divide as polynomials in dy/dx from the dx-leading end; fall back to the other end
    lead = next(i for i, c in enumerate(b) if c)
    for i in range(len(q)):
        c = a[i + lead] / b[lead]
        q[i] = c
        for j, v in enumerate(b):
            a[i + j] -= c * v
    if any(a):
        raise ArithmeticError("binary form division is not exact")
    return q
