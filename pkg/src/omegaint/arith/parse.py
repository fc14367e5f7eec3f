"""Recursive-descent parser for polynomial and HS expressions.

Grammar (whitespace is insignificant)::

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := factor (('*'|'/') factor)*
    factor  := ('+'|'-') factor | power
    power   := atom ['^' INT]
    atom    := NUMBER | IDENT | 'd' INT '(' expr ')' | '(' expr ')'

Division is only allowed by nonzero constants, so ``3/4*x`` is a literal
times ``x``.  ``d<k>(x)`` of a bare variable becomes the variable named
``d<k>(x)``; of a compound expression it is expanded by the HS rules.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import ExprSyntaxError
from .poly import Poly
from .series import TruncatedSeries

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")
_DVAR = re.compile(r"^d([1-9]\d*)$")
DSYM = re.compile(r"^d([1-9]\d*)\(([A-Za-z_][A-Za-z0-9_]*)\)$")


def dvar(k, name):
    return f"d{k}({name})"


def split_dvar(name):
    """``'d2(x)' -> (2, 'x')``; ``None`` for plain variables."""
    m = DSYM.match(name)
    if not m:
        return None
    return int(m.group(1)), m.group(2)


def _tokenize(text):
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1) is not None:
            toks.append(("num", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(("id", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ExprSyntaxError(f"unexpected character {ch!r}", text, m.start(3))
            toks.append(("op", ch, m.start(3)))
        pos = m.end()
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text, variables):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.allowed = None if variables is None else set(variables)
        self.seen = []

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ExprSyntaxError(msg, self.text, tok[2])

    def expect(self, op):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != op:
            self.error(f"expected {op!r}")
        return self.take()

    def note(self, name):
        if name not in self.seen:
            self.seen.append(name)

    def parse(self):
        if self.peek()[0] == "end":
            self.error("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return value

    def expr(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            value = self.term()
            if tok[1] == "-":
                value = -value
        else:
            value = self.term()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                rhs = self.term()
                value = value + rhs if tok[1] == "+" else value - rhs
            else:
                return value

    def term(self):
        value = self.factor()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                value = value * self.factor()
            elif tok[0] == "op" and tok[1] == "/":
                self.take()
                at = self.peek()
                rhs = self.factor()
                if not rhs.is_constant() or rhs.is_zero():
                    self.error("division only by a nonzero constant", at)
                value = value / rhs.constant_value()
            else:
                return value

    def factor(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            value = self.factor()
            return -value if tok[1] == "-" else value
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            e = self.peek()
            if e[0] != "num":
                self.error("expected a non-negative integer exponent")
            self.take()
            return base ** int(e[1])
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return Poly.const(int(val))
        if kind == "id":
            m = _DVAR.match(val)
            nxt = self.peek()
            if m and nxt[0] == "op" and nxt[1] == "(":
                return self.dcall(int(m.group(1)), tok)
            if self.allowed is not None and val not in self.allowed:
                self.error(f"unknown variable {val!r}", tok)
            self.note(val)
            return Poly.var(val)
        if kind == "op" and val == "(":
            value = self.expr()
            self.expect(")")
            return value
        if kind == "end":
            self.error("unexpected end of expression", tok)
        self.error(f"unexpected {val!r}", tok)

    def dcall(self, k, tok):
        self.expect("(")
        start = self.peek()
        if start[0] == "id" and self.toks[self.i + 1][:2] == ("op", ")") and not _DVAR.match(start[1]):
            name = start[1]
            if self.allowed is not None and name not in self.allowed:
                self.error(f"unknown variable {name!r}", start)
            self.take()
            self.expect(")")
            self.note(name)
            v = dvar(k, name)
            self.note(v)
            return Poly.var(v)
        inner = self.expr()
        self.expect(")")
        if any(split_dvar(v) for v in inner.used_variables()):
            self.error("nested differentials are not supported", tok)
        from ..hs import derive_poly

        out = derive_poly(inner, k)
        for v in out.used_variables():
            self.note(v)
        return out


def parse_poly(text, variables=None):
    """Parse ``text`` into a :class:`Poly`.

    With ``variables`` given, any other identifier (other than the
    ``d<k>(...)`` symbols of those variables) is a syntax error, and the
    result is expressed over ``variables`` followed by any d-symbols.
    """
    p = _Parser(text, variables)
    value = p.parse()
    if variables is None:
        order = tuple(p.seen)
    else:
        extra = tuple(v for v in p.seen if v not in variables)
        order = tuple(variables) + extra
    used = set(value.used_variables())
    order = tuple(v for v in order if v in used or (variables is not None and v in variables))
    return value.with_variables(order)


_O_TAIL = re.compile(r"\+?\s*O\(\s*([A-Za-z_][A-Za-z0-9_]*)\s*\^\s*(\d+)\s*\)\s*$")


def parse_series(text):
    """Parse the printed form ``a0 + a1*x + ... + O(x^(N+1))``."""
    m = _O_TAIL.search(text)
    if m is None:
        raise ExprSyntaxError("missing O(x^n) tail", text, len(text))
    var, top = m.group(1), int(m.group(2))
    if top < 1:
        raise ExprSyntaxError("truncation exponent must be positive", text, m.start(2))
    body = text[: m.start()].strip()
    poly = parse_poly(body, (var,)) if body else Poly.zero((var,))
    if poly.degree(var) > top - 1:
        raise ExprSyntaxError("term beyond the truncation order", text, 0)
    return TruncatedSeries(poly.to_dense(var) if poly else [], top - 1, var)


def parse_rational(text):
    """A signed rational literal ``p`` or ``p/q``."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ExprSyntaxError("not a rational literal", text, 0) from None
