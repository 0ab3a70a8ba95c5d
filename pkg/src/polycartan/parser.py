"""Expression parser and printer for chart polynomials.

Grammar (juxtaposition is NOT multiplication):

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := atom ['^' nat]
    atom   := rational | generator | '(' expr ')'

Rationals are ``3`` or ``3/4``; generator names are chart names (on a
shifted chart the d-generators parse by their own names, e.g. ``dq``).
An odd generator raised to a power >= 2 normalizes to zero; that is a
warning, not an error.
"""

from __future__ import annotations

import re
import warnings
from fractions import Fraction

from .algebra import Chart, ChartError, Derivation, GradedPoly


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class OddPowerWarning(UserWarning):
    """An odd generator was raised to a power >= 2 and vanished."""


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            break
        if m.group("num"):
            tokens.append(("num", m.group("num"), m.start("num")))
        elif m.group("name"):
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens, chart: Chart):
        self.tokens = tokens
        self.pos = 0
        self.chart = chart

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, val, at = self.next()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", at)

    def parse_expr(self) -> GradedPoly:
        kind, val, _ = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.next()
            sign = -1 if val == "-" else 1
        out = self.parse_term() * sign
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                term = self.parse_term()
                out = out + (term if val == "+" else -term)
            else:
                return out

    def parse_term(self) -> GradedPoly:
        out = self.parse_factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.next()
                out = out * self.parse_factor()
            else:
                return out

    def parse_factor(self) -> GradedPoly:
        atom, was_gen, at = self.parse_atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.next()
            nkind, nval, nat = self.next()
            if nkind != "num" or "/" in nval:
                raise ParseError("exponent must be a natural number", nat)
            n = int(nval)
            result = atom**n
            if was_gen and n >= 2 and result.is_zero():
                warnings.warn(
                    f"odd generator raised to power {n} vanishes",
                    OddPowerWarning,
                    stacklevel=4,
                )
            return result
        return atom

    def parse_atom(self):
        kind, val, at = self.next()
        if kind == "num":
            return self.chart.const(Fraction(val)), False, at
        if kind == "name":
            try:
                return self.chart.var(val), True, at
            except ChartError:
                raise ParseError(f"unknown generator {val!r}", at) from None
        if kind == "op" and val == "(":
            inner = self.parse_expr()
            self.expect_op(")")
            return inner, False, at
        raise ParseError(f"unexpected token {val!r}" if val else "unexpected end", at)


def parse_expr(text: str, chart: Chart) -> GradedPoly:
    parser = _Parser(_tokenize(text), chart)
    out = parser.parse_expr()
    kind, val, at = parser.peek()
    if kind != "end":
        raise ParseError(f"trailing input {val!r}", at)
    return out


def format_poly(f: GradedPoly) -> str:
    """Normal-form string; round-trips through :func:`parse_expr`."""
    if f.is_zero():
        return "0"
    chart = f.chart
    pieces = []
    for mono in sorted(f.terms, reverse=True):
        c = f.terms[mono]
        factors = []
        for i, e in enumerate(mono):
            if not e:
                continue
            name = chart.generators[i].name
            factors.append(name if e == 1 else f"{name}^{e}")
        mag = -c if c < 0 else c
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if not pieces:
            pieces.append(body if c > 0 else "-" + body)
        else:
            pieces.append((" + " if c > 0 else " - ") + body)
    return "".join(pieces)


def format_tuple(fs) -> str:
    return "(" + ", ".join(format_poly(f) for f in fs) + ")"


def format_derivation(x: Derivation) -> str:
    if not x.components:
        return "0"
    parts = []
    for name in x.chart.names:
        comp = x.components.get(name)
        if comp is None or comp.is_zero():
            continue
        parts.append(f"({format_poly(comp)})*d/d{name}")
    return " + ".join(parts)
