"""Recursive-descent parser for polynomial expressions over radical towers.

Grammar (whitespace-insensitive)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := INT | 'sqrt' '(' INT ')' | NAME | '(' expr ')'

``NAME`` is one of the caller's variables or ``i``.  Division is allowed only
by a nonzero constant.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable

from .errors import DSLSyntaxError
from .exactnum import ONE, I, TowerElement

_TOKEN = re.compile(r"\s*(?:(\d+)|(\*\*|[-+*/^()])|([A-Za-z_][A-Za-z_0-9]*))")
_ALIASES = {"−": "-", "·": "*", "×": "*"}

Monomial = tuple[int, ...]


class Poly:
    """Sparse polynomial in named variables with TowerElement coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict[Monomial, TowerElement] | None = None):
        self.nvars = nvars
        self.terms = {m: c for m, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def const(cls, nvars: int, c: TowerElement) -> Poly:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, idx: int) -> Poly:
        m = [0] * nvars
        m[idx] = 1
        return cls(nvars, {tuple(m): ONE})

    def is_const(self) -> bool:
        return all(not any(m) for m in self.terms)

    def const_value(self) -> TowerElement:
        return self.terms.get((0,) * self.nvars, TowerElement())

    def __add__(self, other: Poly) -> Poly:
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t[m] + c if m in t else c
        return Poly(self.nvars, t)

    def __neg__(self) -> Poly:
        return Poly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other: Poly) -> Poly:
        t: dict[Monomial, TowerElement] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                p = c1 * c2
                t[m] = t[m] + p if m in t else p
        return Poly(self.nvars, t)

    def __pow__(self, n: int) -> Poly:
        out = Poly.const(self.nvars, ONE)
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c: TowerElement) -> Poly:
        return Poly(self.nvars, {m: k * c for m, k in self.terms.items()})


class _Parser:
    def __init__(self, text: str, variables: Iterable[str]):
        self.text = text
        self.vars = list(variables)
        self.n = len(self.vars)
        self.toks = self._tokenize(text)
        self.i = 0

    def _tokenize(self, text: str) -> list[tuple[str, str, int]]:
        for a, b in _ALIASES.items():
            text = text.replace(a, b)
        out = []
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise DSLSyntaxError(f"unexpected character {text[pos]!r}", pos, self.text)
            start = m.start(m.lastindex)
            if m.group(1):
                out.append(("int", m.group(1), start))
            elif m.group(2):
                op = "^" if m.group(2) == "**" else m.group(2)
                out.append(("op", op, start))
            else:
                out.append(("name", m.group(3), start))
            pos = m.end()
        out.append(("end", "", len(text)))
        return out

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def take(self, kind: str, value: str | None = None) -> tuple[str, str, int]:
        tok = self.peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise DSLSyntaxError(f"expected {want!r}, found {got!r}", tok[2], self.text)
        self.i += 1
        return tok

    def parse(self) -> Poly:
        if self.peek()[0] == "end":
            raise DSLSyntaxError("empty expression", 0, self.text)
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise DSLSyntaxError(f"unexpected {tok[1]!r}", tok[2], self.text)
        return p

    def expr(self) -> Poly:
        p = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take("op")[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Poly:
        p = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op, pos = self.take("op")[1:]
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if not q.is_const() or q.const_value().is_zero():
                    raise DSLSyntaxError("division by a non-constant or zero", pos, self.text)
                p = p.scale(q.const_value().inverse())
        return p

    def unary(self) -> Poly:
        if self.peek()[:2] == ("op", "-"):
            self.take("op")
            return -self.unary()
        if self.peek()[:2] == ("op", "+"):
            self.take("op")
            return self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take("op")
            exp = int(self.take("int")[1])
            return base**exp
        return base

    def atom(self) -> Poly:
        kind, val, pos = self.peek()
        if kind == "int":
            self.take("int")
            return Poly.const(self.n, TowerElement.rational(int(val)))
        if kind == "op" and val == "(":
            self.take("op", "(")
            p = self.expr()
            self.take("op", ")")
            return p
        if kind == "name":
            self.take("name")
            if val == "sqrt":
                self.take("op", "(")
                _, num, npos = self.take("int")
                self.take("op", ")")
                if int(num) <= 0:
                    raise DSLSyntaxError("sqrt needs a positive integer", npos, self.text)
                return Poly.const(self.n, TowerElement.sqrt_rational(int(num)))
            if val == "i":
                return Poly.const(self.n, I)
            if val in self.vars:
                return Poly.var(self.n, self.vars.index(val))
            raise DSLSyntaxError(f"unknown name {val!r}", pos, self.text)
        raise DSLSyntaxError(f"unexpected {val or 'end of input'!r}", pos, self.text)


def parse_poly(text: str, variables: Iterable[str]) -> Poly:
    return _Parser(text, variables).parse()


def parse_constant(text: str) -> TowerElement:
    """Parse the normalized text form of a TowerElement (no variables)."""
    return _Parser(text, ()).parse().const_value()


def parse_rational(text: str) -> Fraction:
    value = parse_constant(text)
    if not value.is_rational():
        raise DSLSyntaxError(f"expected a rational, got {text!r}")
    return value.to_fraction()
