"""The graded Hasse-Schmidt algebra of order m.

An :class:`HSForm` of order ``m`` and weighted degree ``r`` over coordinates
``x_1..x_n`` is a finite sum ``sum_h c_h * prod_{p,q} d_p(x_q)^h[p,q]`` with
``sum p*h[p,q] = r``.  Exponent matrices are stored flattened row by row
(row ``p`` = derivation order), and coefficients are either :class:`Poly`
in the coordinates (chart forms) or :class:`RatFunc` in one variable (forms
over the function field of P^1).

Derivatives of composite expressions follow the universal substitution
rule: ``d_k g`` is the coefficient of ``s^k`` in
``g(x + d_1 x * s + ... + d_m x * s^m)``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .arith.binary import P1Point
from .arith.parse import dvar, parse_poly, split_dvar
from .arith.poly import Poly, _is_scalar, as_fraction
from .arith.ratfunc import RatFunc
from .arith.series import TruncatedSeries
from .errors import ImageOutsideChart, InhomogeneousDegree, OrderOutOfRange

INF = float("inf")


def weighted_degree(e, n):
    return sum((i // n + 1) * h for i, h in enumerate(e))


def _is_zero(c):
    return c == 0


class HSForm:
    __slots__ = ("m", "r", "coords", "coeffs")

    def __init__(self, m, r, coords, coeffs=None, check=True):
        if m < 1:
            raise OrderOutOfRange("HS order must be at least 1")
        self.m = m
        self.r = r
        self.coords = tuple(coords)
        n = len(self.coords)
        clean = {}
        for e, c in (coeffs or {}).items():
            e = tuple(e)
            if _is_zero(c):
                continue
            if check:
                if len(e) != m * n:
                    raise ValueError(f"exponent {e} does not match order {m} and {n} coordinates")
                if weighted_degree(e, n) != r:
                    raise InhomogeneousDegree(
                        f"monomial of weighted degree {weighted_degree(e, n)} in a degree-{r} form")
            clean[e] = c
        self.coeffs = clean

    # -- conversion ----------------------------------------------------------------
    @classmethod
    def from_poly(cls, poly, coords, m, r=None):
        """Split a polynomial in coordinates and ``d<p>(x)`` symbols into a form."""
        coords = tuple(coords)
        n = len(coords)
        index = {}
        for v in poly.used_variables():
            if v in coords:
                continue
            sp = split_dvar(v)
            if sp is None or sp[1] not in coords:
                raise ValueError(f"{v!r} is neither a coordinate nor a differential of one")
            p, name = sp
            if p > m:
                raise OrderOutOfRange(f"{v} exceeds the HS order {m}")
            index[v] = (p - 1) * n + coords.index(name)
        pos = [(i, v) for i, v in enumerate(poly.variables)]
        groups = {}
        for e, c in poly.terms.items():
            flat = [0] * (m * n)
            ce = {}
            for i, v in pos:
                k = e[i]
                if not k:
                    continue
                if v in index:
                    flat[index[v]] += k
                else:
                    ce[v] = k
            key = tuple(flat)
            groups.setdefault(key, {})[tuple(ce.get(v, 0) for v in coords)] = c
        degs = {weighted_degree(e, n) for e in groups}
        if len(degs) > 1:
            raise InhomogeneousDegree(f"mixed weighted degrees {sorted(degs)}")
        if r is None:
            r = degs.pop() if degs else 0
        elif degs and degs != {r}:
            raise InhomogeneousDegree(f"expected weighted degree {r}, found {degs.pop()}")
        coeffs = {k: Poly(t, coords) for k, t in groups.items()}
        return cls(m, r, coords, coeffs)

    @classmethod
    def parse(cls, text, coords, m, r=None):
        return cls.from_poly(parse_poly(text, coords), coords, m, r)

    def dvars(self):
        return [dvar(i // len(self.coords) + 1, self.coords[i % len(self.coords)])
                for i in range(self.m * len(self.coords))]

    def to_poly(self):
        """The form as one polynomial in coordinates and d-symbols (Poly coefficients only)."""
        names = self.dvars()
        allv = self.coords + tuple(names)
        acc = Poly.zero(allv)
        for e, c in self.coeffs.items():
            mono = Poly({(0,) * len(self.coords) + e: 1}, allv)
            acc = acc + mono * _as_poly(c, self.coords)
        return acc

    # -- algebra ---------------------------------------------------------------------
    def _check(self, other):
        if self.m != other.m or self.coords != other.coords:
            raise ValueError("HS forms over different orders or coordinates")

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        if not isinstance(other, HSForm):
            return NotImplemented
        self._check(other)
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        if self.r != other.r:
            raise InhomogeneousDegree(f"adding forms of degrees {self.r} and {other.r}")
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out[e] + c if e in out else c
            if _is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
        return HSForm(self.m, self.r, self.coords, out, check=False)

    def __neg__(self):
        return HSForm(self.m, self.r, self.coords, {e: -c for e, c in self.coeffs.items()}, check=False)

    def __sub__(self, other):
        if not isinstance(other, HSForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HSForm):
            self._check(other)
            out = {}
            for e1, c1 in self.coeffs.items():
                for e2, c2 in other.coeffs.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    prod = c1 * c2
                    out[e] = out[e] + prod if e in out else prod
            return HSForm(self.m, self.r + other.r, self.coords,
                          {e: c for e, c in out.items() if not _is_zero(c)}, check=False)
        if _is_scalar(other) or isinstance(other, (Poly, RatFunc, TruncatedSeries)):
            return HSForm(self.m, self.r, self.coords,
                          {e: c * other for e, c in self.coeffs.items()}, check=True)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k):
        result = HSForm.unit(self.m, self.coords, self._one())
        for _ in range(k):
            result = result * self
        return result

    def _one(self):
        for c in self.coeffs.values():
            return c * 0 + 1
        return Poly.const(1, self.coords)

    @classmethod
    def unit(cls, m, coords, one):
        return cls(m, 0, coords, {(0,) * (m * len(coords)): one}, check=False)

    def __eq__(self, other):
        if not isinstance(other, HSForm):
            return NotImplemented
        if self.coords != other.coords:
            return False
        if not self.coeffs and not other.coeffs:
            return True
        return self.m == other.m and self.r == other.r and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.m, self.r, self.coords, frozenset(self.coeffs.items())))

    def map_coeffs(self, fn):
        return HSForm(self.m, self.r, self.coords, {e: fn(c) for e, c in self.coeffs.items()})

    def monomials(self):
        """Basis monomials in the fixed order (descending lex on the flat exponents)."""
        return sorted(self.coeffs, reverse=True)

    def monomial_str(self, e):
        names = self.dvars()
        parts = []
        for v, k in zip(names, e):
            if k == 1:
                parts.append(v)
            elif k:
                parts.append(f"{v}^{k}")
        return "*".join(parts)

    def __str__(self):
        if not self.coeffs:
            return "0"
        pieces = []
        for e in self.monomials():
            pieces.append(_term_str(self.coeffs[e], self.monomial_str(e)))
        out = pieces[0]
        for p in pieces[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return f"HSForm(m={self.m}, r={self.r}, {str(self)!r})"

    def cleared(self):
        """``(numerators, denominator)`` with one shared denominator in the source variable."""
        var = self.coords[0]
        den = RatFunc.const(1, var)
        for c in self.coeffs.values():
            c = _as_ratfunc(c, var)
            den = den * RatFunc(c.den, None, var) / RatFunc(_gcd_dense(den.num, c.den), None, var)
        nums = {e: (_as_ratfunc(c, var) * den).numerator_poly() for e, c in self.coeffs.items()}
        return nums, den.numerator_poly()


def _gcd_dense(a, b):
    from .arith import univariate as U
    return U.gcd_(a, b)


def _as_poly(c, coords):
    if isinstance(c, Poly):
        return c
    if isinstance(c, RatFunc):
        if len(c.den) != 1:
            raise ValueError("coefficient is not polynomial")
        return c.numerator_poly()
    return Poly.const(c, coords)


def _as_ratfunc(c, var):
    if isinstance(c, RatFunc):
        return c
    if isinstance(c, Poly):
        return RatFunc.from_poly(c, var)
    return RatFunc.const(c, var)


def _ratfunc_series(f, order):
    num = TruncatedSeries(f.num, order, f.var)
    den = TruncatedSeries(f.den, order, f.var)
    return num / den


def _single_term(c):
    if isinstance(c, Poly):
        return len(c.terms) <= 1
    if isinstance(c, RatFunc):
        return len(c.den) == 1 and sum(1 for x in c.num if x) <= 1
    return True


def _term_str(coef, mono):
    cs = str(coef)
    if not mono:
        return cs
    if coef == 1:
        return mono
    if coef == -1:
        return "-" + mono
    if _single_term(coef):
        return f"{cs}*{mono}"
    return f"({cs})*{mono}"


# -- derivation rules ------------------------------------------------------------------

@lru_cache(maxsize=None)
def _bell(k, j, m):
    """``[s^k] (D_1 s + ... + D_m s^m)^j`` as ``((h_1..h_m), coefficient)`` pairs."""
    out = []

    def rec(p, left_k, left_j, hs):
        if p > m:
            if left_k == 0 and left_j == 0:
                coef = factorial(j)
                for h in hs:
                    coef //= factorial(h)
                out.append((tuple(hs), coef))
            return
        for h in range(min(left_j, left_k // p) + 1):
            rec(p + 1, left_k - p * h, left_j - h, hs + [h])

    rec(1, k, j, [])
    return tuple(out)


def hs_derive(f, k, m, var="t"):
    """``d_k`` of a rational function ``f`` of one variable, as a form over k(t).

    ``d_k f = sum_j f^(j)/j! * [s^k](sum_p d_p t s^p)^j``.  ``k = 0`` returns
    ``f`` itself as a degree-0 form.
    """
    if k < 0 or k > m:
        raise OrderOutOfRange(f"d_{k} is outside the HS algebra of order {m}")
    if not isinstance(f, (RatFunc, TruncatedSeries)):
        f = _as_ratfunc(f, var)
    var = f.var
    if k == 0:
        return HSForm(m, 0, (var,), {(0,) * m: f}, check=False)
    out = {}
    g = f
    for j in range(1, k + 1):
        g = g.deriv()
        if g.is_zero():
            break
        gj = g * Fraction(1, factorial(j))
        for hs, coef in _bell(k, j, m):
            out[hs] = out[hs] + gj * coef if hs in out else gj * coef
    return HSForm(m, k, (var,), {e: c for e, c in out.items() if not _is_zero(c)}, check=False)


def derive_poly(f, k, coords=None):
    """Symbolic ``d_k f`` for a polynomial in plain coordinates, as a Poly in d-symbols."""
    if coords is None:
        coords = f.used_variables()
    if k == 0:
        return f
    s = "_s"
    shifted = {}
    for x in coords:
        h = Poly.var(x)
        for p in range(1, k + 1):
            h = h + Poly.var(dvar(p, x)) * Poly.var(s) ** p
        shifted[x] = h
    g = f.subs(shifted) if coords else f * 0
    coeff = g.coefficients_in(s).get(k)
    if coeff is None:
        return Poly.zero(tuple(coords))
    return coeff.drop_unused()


def hs_reduce(expr, coords=None, m=None):
    """Normal form of an HS expression given as text or as a polynomial in d-symbols."""
    poly = parse_poly(expr) if isinstance(expr, str) else expr
    found = []
    top = 1
    for v in poly.used_variables():
        sp = split_dvar(v)
        name = v if sp is None else sp[1]
        if sp is not None:
            top = max(top, sp[0])
        if name not in found:
            found.append(name)
    if coords is None:
        coords = tuple(found) or ("t",)
    return HSForm.from_poly(poly, coords, m or top)


def hs_pullback(omega, param, m=None):
    """Pull a chart form back along ``x_q = x_q(t)``.

    ``param`` maps each chart coordinate to a :class:`RatFunc` (all in the
    same variable) or to ``None`` when that coordinate is undefined along the
    curve.  Values may also be :class:`TruncatedSeries`, in which case the
    result has series coefficients.  Returns the normal form over k(t).
    """
    m = m or omega.m
    if omega.m > m:
        raise OrderOutOfRange("target order is below the form's order")
    values = {}
    var = None
    for x in omega.coords:
        v = param.get(x)
        if v is None:
            raise ImageOutsideChart(f"coordinate {x} is undefined along the curve")
        if not isinstance(v, (RatFunc, TruncatedSeries)):
            v = _as_ratfunc(v, var or "t")
        var = var or v.var
        values[x] = v
    series = [v for v in values.values() if isinstance(v, TruncatedSeries)]
    if series:
        order = min(v.order for v in series)
        one = TruncatedSeries.one(order, var)
        values = {x: (v if isinstance(v, TruncatedSeries) else _ratfunc_series(v, order)) for x, v in values.items()}
    else:
        one = RatFunc.const(1, var)
    n = len(omega.coords)
    # d_p(x_q) along the curve, and their powers on demand
    derived = {}
    for i in range(omega.m * n):
        p, q = i // n + 1, i % n
        derived[i] = hs_derive(values[omega.coords[q]], p, m, var)
    powers = {}

    def power(i, h):
        key = (i, h)
        if key not in powers:
            powers[key] = derived[i] if h == 1 else power(i, h - 1) * derived[i]
        return powers[key]

    total = HSForm(m, omega.r, (var,))
    for e, c in omega.coeffs.items():
        if isinstance(c, Poly):
            cv = c.evaluate(values, one)
        elif isinstance(c, RatFunc):
            cv = c.compose(values[omega.coords[0]])
        else:
            cv = one * c
        if _is_zero(cv):
            continue
        term = HSForm.unit(m, (var,), cv)
        for i, h in enumerate(e):
            if h:
                term = term * power(i, h)
        total = total + term
    return HSForm(m, omega.r, (var,), total.coeffs, check=False)


def reparametrize(form, rho):
    """Substitute ``t = rho(t')`` into a form over k(t), re-expanding ``d_p t``."""
    return hs_pullback(form, {form.coords[0]: rho})


def vanishing_order(form, q):
    """Order of vanishing at a point of P^1 (``inf`` for the zero form).

    ``q`` is a :class:`P1Point` or an affine value.  At ``[0:1]`` the form is
    first rewritten in the coordinate ``1/t``.
    """
    if form.is_zero():
        return INF
    if not isinstance(q, P1Point):
        q = P1Point(q)
    var = form.coords[0]
    if q.is_infinite:
        form = reparametrize(form, RatFunc([1], [0, 1], var))
        return vanishing_order(form, P1Point(0))
    return min(_as_ratfunc(c, var).ord_at(q.t) for c in form.coeffs.values())
