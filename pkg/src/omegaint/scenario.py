"""Scenario files: a small block language with positions, and its printer.

::

    # comment
    form omega {
      order = 1
      chart = "UX"
      expr = "v*d1(u)^2 - u*d1(u)*d1(v) + d1(v)^2"
    }
    check main1 { type = "main"  form = omega  params = [[1, 0], [1, 1/2]] }

Values are strings, numbers (integers or ``p/q``), lists, or bare
identifiers naming another block.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DuplicateName, ScenarioError, ScenarioSyntaxError, UnknownReference

KINDS = ("form", "map", "divisor", "check", "campaign")

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<number>-?[0-9]+(?:/[0-9]+)?)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<punct>[{}=\[\],;])
""", re.VERBOSE)


@dataclass(frozen=True)
class Pos:
    line: int
    col: int


@dataclass(frozen=True)
class Str:
    text: str
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Num:
    value: Fraction
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Ref:
    name: str
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class List:
    items: tuple
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Entry:
    key: str
    value: object
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Block:
    kind: str
    name: str
    entries: tuple
    pos: Pos = field(default=None, compare=False, repr=False)

    def get(self, key, default=None):
        for e in self.entries:
            if e.key == key:
                return e.value
        return default

    def entry(self, key):
        for e in self.entries:
            if e.key == key:
                return e
        return None

    def keys(self):
        return [e.key for e in self.entries]


@dataclass(frozen=True)
class Scenario:
    blocks: tuple

    def of_kind(self, kind):
        return [b for b in self.blocks if b.kind == kind]

    def block(self, name):
        for b in self.blocks:
            if b.name == name:
                return b
        raise KeyError(name)

    @property
    def forms(self):
        return self.of_kind("form")

    @property
    def maps(self):
        return self.of_kind("map")

    @property
    def divisors(self):
        return self.of_kind("divisor")

    @property
    def checks(self):
        return self.of_kind("check")

    @property
    def campaigns(self):
        return self.of_kind("campaign")


# -- lexer ------------------------------------------------------------------------------------

@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: Pos


def _tokens(text):
    out = []
    line, col, i = 1, 1, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise ScenarioSyntaxError(f"unexpected character {text[i]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            out.append(_Tok(kind, chunk, Pos(line, col)))
        nl = chunk.count("\n")
        if nl:
            line += nl
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        i = m.end()
    out.append(_Tok("eof", "", Pos(line, col)))
    return out


def _unescape(raw):
    return re.sub(r"\\(.)", lambda m: {"n": "\n", "t": "\t"}.get(m.group(1), m.group(1)), raw[1:-1])


# -- parser -----------------------------------------------------------------------------------

class _Parser:
    def __init__(self, text):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind, text=None):
        tok = self.take()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = repr(text) if text else kind
            got = repr(tok.text) if tok.text else "end of file"
            raise ScenarioSyntaxError(f"expected {want}, found {got}", tok.pos.line, tok.pos.col)
        return tok

    def scenario(self):
        blocks = []
        while self.peek().kind != "eof":
            blocks.append(self.block())
        return Scenario(tuple(blocks))

    def block(self):
        kind = self.expect("ident")
        if kind.text not in KINDS:
            raise ScenarioSyntaxError(f"unknown block kind {kind.text!r} (expected one of {', '.join(KINDS)})",
                                      kind.pos.line, kind.pos.col)
        name = self.expect("ident")
        self.expect("punct", "{")
        entries = []
        while not (self.peek().kind == "punct" and self.peek().text == "}"):
            if self.peek().kind == "punct" and self.peek().text == ";":
                self.take()
                continue
            entries.append(self.entry())
        self.take()
        return Block(kind.text, name.text, tuple(entries), kind.pos)

    def entry(self):
        key = self.expect("ident")
        self.expect("punct", "=")
        return Entry(key.text, self.value(), key.pos)

    def value(self):
        tok = self.take()
        if tok.kind == "string":
            return Str(_unescape(tok.text), tok.pos)
        if tok.kind == "number":
            return Num(Fraction(tok.text), tok.pos)
        if tok.kind == "ident":
            return Ref(tok.text, tok.pos)
        if tok.kind == "punct" and tok.text == "[":
            items = []
            while True:
                nxt = self.peek()
                if nxt.kind == "punct" and nxt.text == "]":
                    self.take()
                    break
                items.append(self.value())
                nxt = self.peek()
                if nxt.kind == "punct" and nxt.text == ",":
                    self.take()
                elif not (nxt.kind == "punct" and nxt.text == "]"):
                    raise ScenarioSyntaxError(f"expected ',' or ']', found {nxt.text or 'end of file'!r}",
                                              nxt.pos.line, nxt.pos.col)
            return List(tuple(items), tok.pos)
        got = repr(tok.text) if tok.text else "end of file"
        raise ScenarioSyntaxError(f"expected a value, found {got}", tok.pos.line, tok.pos.col)


def _refs(value):
    if isinstance(value, Ref):
        yield value
    elif isinstance(value, List):
        for v in value.items:
            yield from _refs(v)


def parse_scenario(text):
    """Parse and check names: duplicates and dangling references are errors."""
    sc = _Parser(text).scenario()
    seen = {}
    for b in sc.blocks:
        if b.name in seen:
            raise DuplicateName(f"name {b.name!r} already defined at line {seen[b.name].line}",
                                b.pos.line if b.pos else None, b.pos.col if b.pos else None)
        seen[b.name] = b.pos or Pos(0, 0)
        keys = set()
        for e in b.entries:
            if e.key in keys:
                raise DuplicateName(f"key {e.key!r} repeated in {b.name}",
                                    e.pos.line if e.pos else None, e.pos.col if e.pos else None)
            keys.add(e.key)
    for b in sc.blocks:
        for e in b.entries:
            for ref in _refs(e.value):
                if ref.name not in seen:
                    raise UnknownReference(f"unknown reference {ref.name!r}",
                                           ref.pos.line if ref.pos else None, ref.pos.col if ref.pos else None)
    return sc


# -- printer ----------------------------------------------------------------------------------

def _fmt_value(v):
    if isinstance(v, Str):
        return '"' + v.text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t") + '"'
    if isinstance(v, Num):
        f = Fraction(v.value)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    if isinstance(v, Ref):
        return v.name
    if isinstance(v, List):
        return "[" + ", ".join(_fmt_value(x) for x in v.items) + "]"
    raise TypeError(f"not a scenario value: {v!r}")


def print_scenario(sc):
    out = []
    for b in sc.blocks:
        out.append(f"{b.kind} {b.name} {{")
        for e in b.entries:
            out.append(f"  {e.key} = {_fmt_value(e.value)}")
        out.append("}")
        out.append("")
    return "\n".join(out)


def error_at(node, message, cls=ScenarioError):
    pos = getattr(node, "pos", None)
    return cls(message, pos.line if pos else None, pos.col if pos else None)


__all__ = [
    "Block", "Entry", "KINDS", "List", "Num", "Pos", "Ref", "Scenario", "Str", "error_at",
    "parse_scenario", "print_scenario",
]
