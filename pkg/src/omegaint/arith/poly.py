"""Sparse multivariate polynomials over Q.

A :class:`Poly` is an immutable map from exponent vectors to nonzero
:class:`~fractions.Fraction` coefficients over an ordered tuple of variable
names.  Binary operations between polynomials over different variable
tuples first merge the tuples (left operand's order wins), so ``x + y``
just works.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from numbers import Rational

from ..errors import ZeroPolynomial

NEG_INF = float("-inf")


def as_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, Rational):
        return Fraction(c.numerator, c.denominator)
    raise TypeError(f"not an exact rational: {c!r}")


def _is_scalar(x):
    return isinstance(x, (int, Fraction)) or (isinstance(x, Rational) and not isinstance(x, bool))


class Poly:
    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, terms=None, variables=()):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != n or any(x < 0 for x in e):
                    raise ValueError(f"bad exponent vector {e} for variables {self.variables}")
                c = as_fraction(c)
                if c:
                    clean[e] = clean.get(e, 0) + c
        self.terms = {e: c for e, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms, variables):
        p = cls.__new__(cls)
        p.variables = variables
        p.terms = terms
        p._hash = None
        return p

    # -- constructors ------------------------------------------------------
    @classmethod
    def const(cls, c, variables=()):
        c = as_fraction(c)
        variables = tuple(variables)
        return cls._raw({(0,) * len(variables): c} if c else {}, variables)

    @classmethod
    def var(cls, name, variables=None):
        variables = tuple(variables) if variables is not None else (name,)
        if name not in variables:
            variables = variables + (name,)
        e = tuple(1 if v == name else 0 for v in variables)
        return cls._raw({e: Fraction(1)}, variables)

    @classmethod
    def zero(cls, variables=()):
        return cls._raw({}, tuple(variables))

    @classmethod
    def from_dense(cls, coeffs, var):
        """Univariate polynomial from low-to-high coefficients."""
        return cls({(i,): c for i, c in enumerate(coeffs) if c}, (var,))

    # -- variable bookkeeping ----------------------------------------------
    def with_variables(self, variables):
        """Re-express over ``variables`` (must contain every used variable)."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = {v: i for i, v in enumerate(variables)}
        idx = []
        for i, v in enumerate(self.variables):
            if v in pos:
                idx.append(pos[v])
            else:
                idx.append(None)
        n = len(variables)
        out = {}
        for e, c in self.terms.items():
            new = [0] * n
            for i, x in enumerate(e):
                if x:
                    j = idx[i]
                    if j is None:
                        raise ValueError(f"variable {self.variables[i]!r} is used but not kept")
                    new[j] = x
            out[tuple(new)] = c
        return Poly._raw(out, variables)

    def used_variables(self):
        used = [False] * len(self.variables)
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    used[i] = True
        return tuple(v for v, u in zip(self.variables, used) if u)

    def drop_unused(self):
        return self.with_variables(self.used_variables())

    def rename(self, mapping):
        return Poly._raw(dict(self.terms), tuple(mapping.get(v, v) for v in self.variables))

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if _is_scalar(other):
            return Poly.const(other, self.variables)
        return NotImplemented

    def _align(self, other):
        if self.variables == other.variables:
            return self.terms, other.terms, self.variables
        vs = list(self.variables)
        for v in other.variables:
            if v not in vs:
                vs.append(v)
        vs = tuple(vs)
        return self.with_variables(vs).terms, other.with_variables(vs).terms, vs

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, vs = self._align(other)
        out = dict(a)
        for e, c in b.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s += c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Poly._raw(out, vs)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({e: -c for e, c in self.terms.items()}, self.variables)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if _is_scalar(other):
            c = as_fraction(other)
            if not c:
                return Poly.zero(self.variables)
            return Poly._raw({e: x * c for e, x in self.terms.items()}, self.variables)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b, vs = self._align(other)
        out = {}
        get = out.get
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = get(e, 0) + ca * cb
        return Poly._raw({e: c for e, c in out.items() if c}, vs)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _is_scalar(other):
            c = as_fraction(other)
            return Poly._raw({e: x / c for e, x in self.terms.items()}, self.variables)
        if isinstance(other, Poly):
            if other.is_constant():
                return self / other.constant_value()
            return self.exact_div(other)
        return NotImplemented

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly.const(1, self.variables)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- comparison ----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            a, b, _ = self._align(other)
            return a == b
        if _is_scalar(other):
            c = as_fraction(other)
            if not c:
                return not self.terms
            return len(self.terms) == 1 and self.terms.get((0,) * len(self.variables)) == c
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            items = []
            for e, c in self.terms.items():
                key = tuple((v, x) for v, x in zip(self.variables, e) if x)
                items.append((key, c))
            self._hash = hash(frozenset(items))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- queries -------------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def total_degree(self):
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    def degree(self, var):
        if not self.terms:
            return NEG_INF
        if var not in self.variables:
            return 0
        i = self.variables.index(var)
        return max(e[i] for e in self.terms)

    def min_degree(self, var):
        if not self.terms:
            return NEG_INF
        if var not in self.variables:
            return 0
        i = self.variables.index(var)
        return min(e[i] for e in self.terms)

    def is_homogeneous(self):
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def homogeneous_part(self, d):
        return Poly._raw({e: c for e, c in self.terms.items() if sum(e) == d}, self.variables)

    def truncate_total(self, n):
        """Drop every term of total degree > n."""
        return Poly._raw({e: c for e, c in self.terms.items() if sum(e) <= n}, self.variables)

    def coefficient(self, monomial):
        """Coefficient of a monomial given as ``{var: exponent}``."""
        e = tuple(monomial.get(v, 0) for v in self.variables)
        return self.terms.get(e, Fraction(0))

    def coefficients_in(self, var):
        """``{k: coefficient of var^k}`` with coefficients over the other variables."""
        if var not in self.variables:
            return {0: self} if self.terms else {}
        i = self.variables.index(var)
        rest = self.variables[:i] + self.variables[i + 1:]
        out = {}
        for e, c in self.terms.items():
            out.setdefault(e[i], {})[e[:i] + e[i + 1:]] = c
        return {k: Poly._raw(t, rest) for k, t in out.items()}

    def to_dense(self, var=None):
        """Low-to-high coefficient list of a polynomial in at most one variable."""
        used = self.used_variables()
        if len(used) > 1 or (var is not None and used and used[0] != var):
            raise ValueError(f"not univariate in {var!r}: {self}")
        if not used:
            c = self.constant_value()
            return [c] if c else []
        i = self.variables.index(used[0])
        out = [Fraction(0)] * (self.degree(used[0]) + 1)
        for e, c in self.terms.items():
            out[e[i]] = c
        return out

    # -- calculus and substitution --------------------------------------------
    def diff(self, var):
        if var not in self.variables:
            return Poly.zero(self.variables)
        i = self.variables.index(var)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                out[e[:i] + (k - 1,) + e[i + 1:]] = c * k
        return Poly._raw(out, self.variables)

    def evaluate(self, values, one=None):
        """Evaluate with every variable replaced by ``values[var]``.

        Values may live in any commutative ring containing Q that supports
        ``+`` and ``*`` (Fractions, :class:`Poly`, rational functions, series).
        ``one`` is that ring's identity; it defaults to ``Fraction(1)``.
        """
        if one is None:
            one = Fraction(1)
        vals = []
        for v in self.variables:
            vals.append(values[v] if v in values else None)
        cache = [dict() for _ in self.variables]

        def pw(i, k):
            c = cache[i]
            if k not in c:
                if vals[i] is None:
                    raise KeyError(f"no value for variable {self.variables[i]!r}")
                c[k] = vals[i] ** k if k > 1 else vals[i]
            return c[k]

        acc = one * 0
        for e, c in self.terms.items():
            term = one * c
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            acc = acc + term
        return acc

    def subs(self, mapping):
        """Substitute some variables by polynomials or scalars."""
        vs = [v for v in self.variables if v not in mapping]
        for val in mapping.values():
            if isinstance(val, Poly):
                for v in val.variables:
                    if v not in vs:
                        vs.append(v)
        target = tuple(vs)
        values = {}
        for v in self.variables:
            if v in mapping:
                val = mapping[v]
                values[v] = val.with_variables(target) if isinstance(val, Poly) else Poly.const(val, target)
            else:
                values[v] = Poly.var(v, target)
        return self.evaluate(values, Poly.const(1, target))

    def homogenize(self, var, degree=None):
        """Homogenize with the new variable ``var`` placed first."""
        d = self.total_degree() if degree is None else degree
        if not self.terms:
            return Poly.zero((var,) + self.variables)
        out = {}
        for e, c in self.terms.items():
            out[(d - sum(e),) + e] = c
        return Poly._raw(out, (var,) + self.variables)

    # -- division -------------------------------------------------------------
    def exact_div(self, other):
        """Exact quotient; raises ``ValueError`` when ``other`` does not divide."""
        if isinstance(other, Poly) and other.is_constant():
            other = other.constant_value()
        if _is_scalar(other):
            return self / other
        if not other.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        a, b, vs = self._align(other)
        lead_b = max(b)
        cb = b[lead_b]
        rem = dict(a)
        quo = {}
        while rem:
            lead = max(rem)
            diff = tuple(x - y for x, y in zip(lead, lead_b))
            if any(x < 0 for x in diff):
                raise ValueError("inexact polynomial division")
            c = rem[lead] / cb
            quo[diff] = c
            for e, x in b.items():
                k = tuple(p + q for p, q in zip(e, diff))
                s = rem.get(k, 0) - c * x
                if s:
                    rem[k] = s
                else:
                    rem.pop(k, None)
        return Poly._raw(quo, vs)

    def divides(self, other):
        try:
            other.exact_div(self)
        except ValueError:
            return False
        return True

    # -- normalisation --------------------------------------------------------
    def leading_coefficient_grevlex(self):
        if not self.terms:
            return Fraction(0)
        return self.terms[max(self.terms, key=_grevlex_key)]

    def primitive(self):
        """Coprime integer coefficients, positive leading (grevlex) coefficient."""
        if not self.terms:
            return self
        den = 1
        for c in self.terms.values():
            den = lcm(den, c.denominator)
        g = 0
        for c in self.terms.values():
            g = gcd(g, int(c * den))
        scale = Fraction(den, g)
        if self.leading_coefficient_grevlex() < 0:
            scale = -scale
        return self * scale

    def monic(self):
        if not self.terms:
            return self
        return self / self.leading_coefficient_grevlex()

    # -- display ----------------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda item: _grevlex_key(item[0]), reverse=True)

    def __str__(self):
        return format_terms(self.sorted_terms(), self.variables)

    def __repr__(self):
        return f"Poly({str(self)!r}, {self.variables!r})"


def _grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def format_scalar(c):
    c = as_fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_monomial(e, variables):
    parts = []
    for v, k in zip(variables, e):
        if k == 1:
            parts.append(v)
        elif k:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def format_terms(items, variables):
    if not items:
        return "0"
    out = []
    for idx, (e, c) in enumerate(items):
        mono = format_monomial(e, variables)
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        if mono:
            body = mono if a == 1 else f"{format_scalar(a)}*{mono}"
        else:
            body = format_scalar(a)
        if idx == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


# -- gcd and squarefree machinery ------------------------------------------------

def _main_index(f, g):
    n = len(f.variables)
    for i in range(n - 1, -1, -1):
        if any(e[i] for e in f.terms) or any(e[i] for e in g.terms):
            return i
    return None


def _deg_in(f, i):
    return max(e[i] for e in f.terms) if f.terms else -1


def _coeff_at(f, i, k):
    out = {}
    for e, c in f.terms.items():
        if e[i] == k:
            out[e[:i] + (0,) + e[i + 1:]] = c
    return Poly._raw(out, f.variables)


def _content(f, i):
    c = Poly.zero(f.variables)
    for k in sorted({e[i] for e in f.terms}):
        c = _gcd(c, _coeff_at(f, i, k))
        if c.is_constant():
            return Poly.const(1, f.variables)
    return c


def _prem(a, b, i):
    db = _deg_in(b, i)
    lb = _coeff_at(b, i, db)
    r = a
    xi = [0] * len(a.variables)
    while r.terms and _deg_in(r, i) >= db:
        dr = _deg_in(r, i)
        lr = _coeff_at(r, i, dr)
        xi[i] = dr - db
        shift = Poly._raw({tuple(xi): Fraction(1)}, a.variables)
        r = (lb * r - lr * shift * b).primitive()
    return r


def _gcd(f, g):
    if not f.terms:
        return g.primitive() if g.terms else g
    if not g.terms:
        return f.primitive()
    i = _main_index(f, g)
    if i is None:
        return Poly.const(1, f.variables)
    if _deg_in(f, i) == 0:
        return _gcd(f, _content(g, i))
    if _deg_in(g, i) == 0:
        return _gcd(_content(f, i), g)
    cf, cg = _content(f, i), _content(g, i)
    c = _gcd(cf, cg)
    a = f.exact_div(cf).primitive()
    b = g.exact_div(cg).primitive()
    if _deg_in(a, i) < _deg_in(b, i):
        a, b = b, a
    while True:
        r = _prem(a, b, i)
        if not r.terms:
            break
        if _deg_in(r, i) == 0:
            b = Poly.const(1, f.variables)
            break
        a, b = b, r.exact_div(_content(r, i)).primitive()
    if b.terms and _deg_in(b, i) > 0:
        b = b.exact_div(_content(b, i))
    return (c * b).primitive()


def poly_gcd(f, g):
    """Greatest common divisor over Q, normalised by :meth:`Poly.primitive`."""
    if not isinstance(f, Poly):
        f = Poly.const(f)
    if not isinstance(g, Poly):
        g = Poly.const(g)
    a, b, vs = f._align(g)
    return _gcd(Poly._raw(a, vs), Poly._raw(b, vs))


def is_squarefree(f):
    """True iff ``f`` has no repeated non-constant factor over Q.

    In characteristic zero a repeated factor divides ``f`` and every partial
    derivative, and conversely a common factor of ``f`` and all its partials
    must be repeated.
    """
    if not f.terms:
        raise ZeroPolynomial("squarefree test of the zero polynomial")
    g = f
    for v in f.used_variables():
        g = poly_gcd(g, f.diff(v))
        if g.is_constant():
            return True
    return g.is_constant()


def squarefree_part(f):
    if not f.terms:
        raise ZeroPolynomial("squarefree part of the zero polynomial")
    g = f
    for v in f.used_variables():
        g = poly_gcd(g, f.diff(v))
    return f.exact_div(g).primitive()


def poly_lcm(f, g):
    return (f * g).exact_div(poly_gcd(f, g)).primitive()


def variables_poly(names):
    """Tuple of coordinate polynomials over ``names``."""
    names = tuple(names)
    return tuple(Poly.var(n, names) for n in names)
