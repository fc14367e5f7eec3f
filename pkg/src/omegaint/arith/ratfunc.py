"""Univariate rational functions over Q, kept in lowest terms."""

from __future__ import annotations

from fractions import Fraction

from . import univariate as U
from .poly import Poly, _is_scalar, as_fraction


class RatFunc:
    """``num/den`` in one variable; ``den`` is monic and coprime to ``num``."""

    __slots__ = ("var", "num", "den")

    def __init__(self, num, den=None, var="t", _normalized=False):
        self.var = var
        num = U.trim(as_fraction(c) for c in num)
        den = [Fraction(1)] if den is None else U.trim(as_fraction(c) for c in den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if (not _normalized and len(den) > 1) or den[-1] != 1:
            if not num:
                den = [Fraction(1)]
            else:
                g = U.gcd_(num, den)
                if len(g) > 1:
                    num = U.exact_quo(num, g)
                    den = U.exact_quo(den, g)
                lead = den[-1]
                if lead != 1:
                    num = [c / lead for c in num]
                    den = [c / lead for c in den]
        self.num = num
        self.den = den

    # -- constructors -----------------------------------------------------------
    @classmethod
    def const(cls, c, var="t"):
        c = as_fraction(c)
        return cls([c] if c else [], None, var, True)

    @classmethod
    def x(cls, var="t"):
        return cls([Fraction(0), Fraction(1)], None, var, True)

    @classmethod
    def from_poly(cls, p, var=None):
        if var is None:
            used = p.used_variables()
            var = used[0] if used else "t"
        return cls(p.to_dense(var), None, var)

    @classmethod
    def from_polys(cls, num, den, var=None):
        if var is None:
            used = num.used_variables() or den.used_variables()
            var = used[0] if used else "t"
        return cls(num.to_dense(var), den.to_dense(var), var)

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if _is_scalar(other):
            return RatFunc.const(other, self.var)
        if isinstance(other, Poly):
            return RatFunc.from_poly(other, self.var)
        return NotImplemented

    # -- arithmetic -------------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            return RatFunc(U.add(self.num, other.num), self.den, self.var)
        num = U.add(U.mul(self.num, other.den), U.mul(other.num, self.den))
        return RatFunc(num, U.mul(self.den, other.den), self.var)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(U.neg(self.num), self.den, self.var, True)

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
            return RatFunc(U.scale(self.num, c), self.den, self.var, True)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num or not other.num:
            return RatFunc.const(0, self.var)
        if len(self.den) == 1 and len(other.den) == 1:
            return RatFunc(U.mul(self.num, other.num), None, self.var, True)
        return RatFunc(U.mul(self.num, other.num), U.mul(self.den, other.den), self.var)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(U.mul(self.num, other.den), U.mul(self.den, other.num), self.var)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, e):
        if e < 0:
            return RatFunc.const(1, self.var) / (self ** (-e))
        return RatFunc(U.power(self.num, e), U.power(self.den, e), self.var, True)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((tuple(self.num), tuple(self.den)))

    def __bool__(self):
        return bool(self.num)

    def is_zero(self):
        return not self.num

    # -- calculus -------------------------------------------------------------
    def deriv(self):
        num = U.sub(U.mul(U.deriv(self.num), self.den), U.mul(self.num, U.deriv(self.den)))
        return RatFunc(num, U.mul(self.den, self.den), self.var)

    def compose(self, inner):
        """``self(inner)`` for a rational function ``inner``."""
        one = RatFunc.const(1, inner.var)
        def ev(coeffs):
            acc = RatFunc.const(0, inner.var)
            for c in reversed(coeffs):
                acc = acc * inner + one * c
            return acc
        return ev(self.num) / ev(self.den)

    def __call__(self, x):
        x = as_fraction(x)
        d = U.evaluate(self.den, x)
        if not d:
            raise ZeroDivisionError(f"pole at {x}")
        return U.evaluate(self.num, x) / d

    def ord_at(self, x0):
        """Valuation at a finite point ``x0``; ``None`` stands for the point at infinity."""
        if not self.num:
            return float("inf")
        if x0 is None:
            return U.deg(self.den) - U.deg(self.num)
        return U.ord_at(self.num, x0) - U.ord_at(self.den, x0)

    def degree(self):
        return max(U.deg(self.num), U.deg(self.den))

    def numerator_poly(self):
        return Poly.from_dense(self.num, self.var)

    def denominator_poly(self):
        return Poly.from_dense(self.den, self.var)

    def __str__(self):
        n = str(self.numerator_poly())
        if len(self.den) == 1:
            return n
        return f"({n})/({self.denominator_poly()})"

    __repr__ = __str__
