"""Points of P^1, binary forms, orders of vanishing and discriminants."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import DegreeZero, ZeroPolynomial
from . import univariate as U
from .poly import Poly, as_fraction

SOURCE_VARS = ("s", "t")


@dataclass(frozen=True)
class P1Point:
    """A point ``[s:t]`` of P^1, stored normalised as ``[1:t/s]`` or ``[0:1]``."""

    s: Fraction
    t: Fraction

    def __init__(self, s, t=None):
        if t is None:
            # a bare affine value, or None for infinity
            if s is None:
                s, t = 0, 1
            else:
                s, t = 1, s
        s, t = as_fraction(s), as_fraction(t)
        if not s and not t:
            raise ValueError("[0:0] is not a point of P^1")
        if s:
            s, t = Fraction(1), t / s
        else:
            t = Fraction(1)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)

    @property
    def affine(self):
        """Value of the affine coordinate t/s, or ``None`` at [0:1]."""
        return self.t if self.s else None

    @property
    def is_infinite(self):
        return not self.s

    def __str__(self):
        return f"[{_fmt(self.s)}:{_fmt(self.t)}]"

    __repr__ = __str__

    def sort_key(self):
        return (self.s == 0, self.t)


INFINITY = P1Point(0, 1)


def _fmt(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _split_vars(f, variables):
    s, t = variables
    if not set(f.used_variables()) <= {s, t}:
        raise ValueError(f"expected a binary form in {s}, {t}: {f}")
    return f.with_variables((s, t))


def dehomogenize(f, variables=SOURCE_VARS):
    """Return ``(f(1, x) as a dense list, total degree)``."""
    f = _split_vars(f, variables)
    if f.is_zero():
        raise ZeroPolynomial("the zero binary form has no roots")
    if not f.is_homogeneous():
        raise ValueError(f"not homogeneous: {f}")
    d = int(f.total_degree())
    dense = [Fraction(0)] * (d + 1)
    for (a, b), c in f.terms.items():
        dense[b] = c
    return U.trim(dense), d


def ord_at(f, q, variables=SOURCE_VARS):
    """Multiplicity of the point ``q`` of P^1 as a root of the binary form ``f``."""
    if not isinstance(q, P1Point):
        q = P1Point(*q)
    f = _split_vars(f, variables)
    if f.is_zero():
        raise ZeroPolynomial("order of vanishing of the zero form")
    dense, d = dehomogenize(f, variables)
    if q.is_infinite:
        return d - U.deg(dense)
    return U.ord_at(dense, q.t)


def roots(f, variables=SOURCE_VARS):
    """Rational roots and irrational residue of a binary form.

    Returns ``(orders, residual)`` where ``orders`` maps each rational root to
    its multiplicity and ``residual`` lists ``(degree, multiplicity)`` blocks
    of the remaining (irrational) roots, one block per multiplicity class.
    """
    dense, d = dehomogenize(f, variables)
    orders = {}
    at_inf = d - U.deg(dense)
    if at_inf:
        orders[INFINITY] = at_inf
    residual = []
    for g, mult in U.squarefree_decomposition(dense):
        rs = U.rational_roots(g)
        for r in rs:
            orders[P1Point(1, r)] = mult
        rest = U.deg(g) - len(rs)
        if rest:
            residual.append((rest, mult))
    return orders, tuple(residual)


def binary_from_dense(dense, degree, variables=SOURCE_VARS):
    """Homogenise a dense polynomial in t/s to a binary form of the given degree."""
    return Poly({(degree - i, i): c for i, c in enumerate(dense) if c}, variables)


# -- binary forms with ring coefficients ----------------------------------------

class BinaryForm:
    """``sum_j A_j X^(r-j) Y^j`` with coefficients in Q or in a polynomial ring."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = tuple(c if isinstance(c, Poly) else as_fraction(c) for c in coeffs)
        if not coeffs:
            raise ValueError("a binary form needs at least one coefficient")
        self.coeffs = coeffs

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return isinstance(other, BinaryForm) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def as_poly(self, variables=("X", "Y")):
        x, y = (Poly.var(v, variables) for v in variables)
        r = self.degree
        acc = Poly.zero(variables)
        for j, c in enumerate(self.coeffs):
            acc = acc + (x ** (r - j)) * (y ** j) * c
        return acc

    def evaluate_coeffs(self, values):
        """Specialise polynomial coefficients at a point."""
        return BinaryForm([c.evaluate(values) if isinstance(c, Poly) else c for c in self.coeffs])

    def partials(self):
        r = self.degree
        fx = [(r - j) * self.coeffs[j] for j in range(r)]
        fy = [j * self.coeffs[j] for j in range(1, r + 1)]
        return fx, fy

    def discriminant(self):
        return binary_form_discriminant(self)

    def __repr__(self):
        return f"BinaryForm({[str(c) for c in self.coeffs]})"


def _det(matrix):
    """Fraction-free Bareiss determinant over Q or Q[vars]."""
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return Fraction(1)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = num.exact_div(prev) if isinstance(num, Poly) else num / prev
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def sylvester(f, g):
    """Sylvester matrix of binary forms given by coefficient lists (highest X power first)."""
    a, b = len(f) - 1, len(g) - 1
    n = a + b
    zero = Fraction(0)
    rows = []
    for i in range(b):
        rows.append([zero] * i + list(f) + [zero] * (n - a - 1 - i))
    for i in range(a):
        rows.append([zero] * i + list(g) + [zero] * (n - b - 1 - i))
    return rows


def resultant(f, g):
    """Resultant of two binary forms (or their coefficient lists)."""
    f = f.coeffs if isinstance(f, BinaryForm) else f
    g = g.coeffs if isinstance(g, BinaryForm) else g
    return _det(sylvester(f, g))


def binary_form_discriminant(form):
    """Discriminant of a binary form of degree r >= 1.

    Computed as ``(-1)^(r(r-1)/2) Res(F_X, F_Y) / r^(r-2)``, which equals
    ``A1^2 - 4 A0 A2`` in degree 2 and 1 in degree 1.  It vanishes exactly
    when the form has a repeated projective root (or is identically zero).
    """
    if not isinstance(form, BinaryForm):
        form = BinaryForm(form)
    r = form.degree
    if r < 1:
        raise DegreeZero("discriminant of a degree-0 form")
    fx, fy = form.partials()
    res = resultant(fx, fy)
    scale = Fraction(r) ** (r - 2)
    sign = -1 if (r * (r - 1) // 2) % 2 else 1
    return res * sign / scale


def linear_factors(form):
    """Split a binary form with rational coefficients over Q.

    Returns ``(factors, residual)``: ``factors`` lists ``((b, c), mult)`` for
    each rational linear factor ``b X + c Y`` and ``residual`` the
    ``(degree, multiplicity)`` blocks of the irreducible non-linear part.
    """
    coeffs = [as_fraction(c) for c in form.coeffs]
    r = len(coeffs) - 1
    # roots in the projective coordinate [X:Y]; A_j multiplies X^(r-j) Y^j
    f = Poly({(r - j, j): c for j, c in enumerate(coeffs) if c}, ("X", "Y"))
    orders, residual = roots(f, ("X", "Y"))
    factors = []
    for pt, mult in sorted(orders.items(), key=lambda kv: kv[0].sort_key()):
        # root [X:Y] = [x0:y0] belongs to the factor y0 X - x0 Y
        factors.append(((pt.t, -pt.s), mult))
    return factors, residual
