"""Recursive-descent parser for polynomial expressions.

Grammar::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' INT)?
    atom   := NUMBER ['/' NUMBER] | VAR | '(' expr ')' | '-' factor
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .multipoly import MultiPoly

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))")


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class _Parser:
    def __init__(self, text: str, variables: Sequence[str], line: int, col_offset: int):
        self.variables = tuple(variables)
        self.line = line
        self.col_offset = col_offset
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                break
            if m.group(1):
                self.tokens.append(("num", m.group(1), m.start(1)))
            elif m.group(2):
                self.tokens.append(("var", m.group(2), m.start(2)))
            elif m.group(3):
                self.tokens.append(("op", m.group(3), m.start(3)))
            pos = m.end()
        self.end = len(text)
        self.i = 0

    def error(self, msg: str, at: int | None = None):
        if at is None:
            at = self.tokens[self.i][2] if self.i < len(self.tokens) else self.end
        raise ParseError(msg, self.line, self.col_offset + at + 1)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, self.end)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> MultiPoly:
        if not self.tokens:
            self.error("empty expression")
        out = self.expr()
        if self.i != len(self.tokens):
            self.error(f"unexpected token {self.peek()[1]!r}")
        return out

    def expr(self) -> MultiPoly:
        kind, val, _ = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term() * sign
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self) -> MultiPoly:
        acc = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.factor()
            elif kind in ("num", "var") or (kind == "op" and val == "("):
                self.error("missing explicit '*'")
            else:
                return acc

    def factor(self) -> MultiPoly:
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, at = self.take()
            if kind != "num":
                self.error("exponent must be a non-negative integer", at)
            return base ** int(val)
        return base

    def atom(self) -> MultiPoly:
        kind, val, at = self.take()
        if kind == "num":
            num = Fraction(int(val))
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "/":
                self.take()
                k3, v3, at3 = self.take()
                if k3 != "num":
                    self.error("expected integer denominator", at3)
                if int(v3) == 0:
                    self.error("zero denominator", at3)
                num = num / int(v3)
            return MultiPoly.const(self.variables, num)
        if kind == "var":
            if val not in self.variables:
                self.error(f"unknown variable {val!r}", at)
            return MultiPoly.var(self.variables, val)
        if kind == "op" and val == "(":
            inner = self.expr()
            k2, v2, at2 = self.take()
            if k2 != "op" or v2 != ")":
                self.error("expected ')'", at2)
            return inner
        if kind == "op" and val == "-":
            return -self.factor()
        if kind is None:
            self.error("unexpected end of expression", at)
        self.error(f"unexpected token {val!r}", at)


def parse_poly(text: str, variables: Sequence[str] = ("x", "y"), line: int = 1, column: int = 0) -> MultiPoly:
    """Parse ``text`` into a MultiPoly over ``variables``."""
    return _Parser(text, variables, line, column).parse()
