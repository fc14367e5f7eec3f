"""Truncated power series in one variable with exact coefficients."""

from __future__ import annotations

from fractions import Fraction

from .poly import Poly, _is_scalar, as_fraction, format_terms

DEFAULT_ORDER = 24


class TruncatedSeries:
    """``a_0 + a_1 x + ... + a_N x^N + O(x^(N+1))``.

    ``order`` is N: the coefficients up to ``x^N`` are exact, everything
    beyond is unknown.  Binary operations keep the smaller order.
    """

    __slots__ = ("coeffs", "order", "var")

    def __init__(self, coeffs, order=DEFAULT_ORDER, var="x"):
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        cs = [as_fraction(c) for c in list(coeffs)[: order + 1]]
        cs.extend([Fraction(0)] * (order + 1 - len(cs)))
        self.coeffs = tuple(cs)
        self.order = order
        self.var = var

    @classmethod
    def const(cls, c, order=DEFAULT_ORDER, var="x"):
        return cls([c], order, var)

    @classmethod
    def one(cls, order=DEFAULT_ORDER, var="x"):
        return cls([1], order, var)

    @classmethod
    def x(cls, order=DEFAULT_ORDER, var="x"):
        return cls([0, 1], order, var)

    @classmethod
    def from_poly(cls, p, order=DEFAULT_ORDER, var=None):
        used = p.used_variables()
        if var is None:
            var = used[0] if used else "x"
        return cls(p.to_dense(var), order, var)

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        if _is_scalar(other):
            return TruncatedSeries.const(other, self.order, self.var)
        return NotImplemented

    # -- arithmetic ---------------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = min(self.order, other.order)
        return TruncatedSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], n, self.var)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-a for a in self.coeffs], self.order, self.var)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            c = as_fraction(other)
            return TruncatedSeries([a * c for a in self.coeffs], self.order, self.var)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            ai = a[i]
            if not ai:
                continue
            for j in range(n + 1 - i):
                if b[j]:
                    out[i + j] += ai * b[j]
        return TruncatedSeries(out, n, self.var)

    __rmul__ = __mul__

    def inverse(self):
        a = self.coeffs
        if not a[0]:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        n = self.order
        inv0 = 1 / a[0]
        out = [inv0]
        for k in range(1, n + 1):
            acc = sum((a[j] * out[k - j] for j in range(1, k + 1)), Fraction(0))
            out.append(-acc * inv0)
        return TruncatedSeries(out, n, self.var)

    def __truediv__(self, other):
        if _is_scalar(other):
            return self * (1 / as_fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = TruncatedSeries.one(self.order, self.var)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = min(self.order, other.order)
        return self.coeffs[: n + 1] == other.coeffs[: n + 1]

    def __hash__(self):
        return hash((self.coeffs, self.order))

    # -- structure ---------------------------------------------------------------
    def truncate(self, n):
        return TruncatedSeries(self.coeffs, min(n, self.order), self.var)

    def valuation(self):
        """Index of the first nonzero coefficient, or ``None`` if zero to this order."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def is_zero(self):
        return self.valuation() is None

    def compose(self, inner):
        """``self(inner)``; ``inner`` must have zero constant term."""
        if inner.coeffs[0]:
            raise ValueError("composition needs an inner series with zero constant term")
        n = min(self.order, inner.order)
        inner = inner.truncate(n)
        acc = TruncatedSeries.const(0, n, inner.var)
        for c in reversed(self.coeffs[: n + 1]):
            acc = acc * inner + c
        return acc

    def deriv(self):
        if self.order == 0:
            raise ValueError("derivative of an order-0 series carries no information")
        return TruncatedSeries([i * c for i, c in enumerate(self.coeffs) if i], self.order - 1, self.var)

    def integrate(self, c0=0):
        out = [as_fraction(c0)] + [c / (i + 1) for i, c in enumerate(self.coeffs)]
        return TruncatedSeries(out, self.order + 1, self.var)

    def to_poly(self):
        return Poly.from_dense(self.coeffs, self.var)

    def __str__(self):
        p = self.to_poly()
        body = format_terms(sorted(p.terms.items(), key=lambda kv: kv[0]), p.variables)
        tail = f"O({self.var}^{self.order + 1})"
        if p.is_zero():
            return tail
        return f"{body} + {tail}"

    def __repr__(self):
        return f"TruncatedSeries({str(self)!r})"
