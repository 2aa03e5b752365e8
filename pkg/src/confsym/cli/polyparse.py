"""Recursive-descent parser for polynomials in ``x1..xn``.

Grammar (LL(1))::

    expr    := term (("+" | "-") term)*
    term    := unary ("*" unary | "/" INT)*
    unary   := ("+" | "-") unary | power
    power   := primary ("^" INT)?
    primary := INT | VAR | "(" expr ")"

``#`` starts a comment running to the end of the line.  Errors carry the
1-based line and column of the offending token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..exact.poly import MultiPoly
from ..exact.scalar import Q


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str  # INT, VAR, OP, END
    text: str
    line: int
    column: int


_TOKEN = re.compile(r"\s+|#[^\n]*|(?P<num>\d+(?:\.\d*)?)|(?P<var>[A-Za-z_]\w*)|(?P<op>[-+*/^()])")


def tokenize(text: str, line: int = 1, column: int = 1) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, column)
        s = m.group(0)
        if m.group("num") is not None:
            if "." in s:
                raise ParseError(f"malformed rational {s!r}: use p/q", line, column)
            out.append(Token("INT", s, line, column))
        elif m.group("var") is not None:
            out.append(Token("VAR", s, line, column))
        elif m.group("op") is not None:
            out.append(Token("OP", s, line, column))
        for ch in s:
            if ch == "\n":
                line += 1
                column = 1
            else:
                column += 1
        pos = m.end()
    out.append(Token("END", "", line, column))
    return out


class _Parser:
    def __init__(self, tokens: list[Token], n: int):
        self.toks = tokens
        self.i = 0
        self.n = n
        self.depth = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(message, tok.line, tok.column)

    def is_op(self, *ops) -> bool:
        return self.tok.kind == "OP" and self.tok.text in ops

    def expr(self) -> MultiPoly:
        p = self.term()
        while self.is_op("+", "-"):
            op = self.advance().text
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> MultiPoly:
        p = self.unary()
        while self.is_op("*", "/"):
            op = self.advance()
            if op.text == "*":
                p = p * self.unary()
                continue
            if self.tok.kind != "INT":
                self.error("malformed rational: expected an integer denominator after '/'")
            d = int(self.tok.text)
            if d == 0:
                self.error("malformed rational: zero denominator")
            self.advance()
            p = p.scale(Q(1, d))
        return p

    def unary(self) -> MultiPoly:
        if self.is_op("-"):
            self.advance()
            return -self.unary()
        if self.is_op("+"):
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> MultiPoly:
        p = self.primary()
        if self.is_op("^"):
            self.advance()
            if self.tok.kind != "INT":
                self.error("exponent must be a non-negative integer")
            p = p ** int(self.advance().text)
        return p

    def primary(self) -> MultiPoly:
        t = self.tok
        if t.kind == "INT":
            self.advance()
            return MultiPoly.const(self.n, int(t.text))
        if t.kind == "VAR":
            m = re.fullmatch(r"x([1-9]\d*)", t.text)
            if m is None or int(m.group(1)) > self.n:
                self.error(f"unknown variable {t.text!r} (expected x1..x{self.n})")
            self.advance()
            return MultiPoly.var(self.n, int(m.group(1)) - 1)
        if self.is_op("("):
            self.advance()
            self.depth += 1
            p = self.expr()
            self.depth -= 1
            if not self.is_op(")"):
                self.error("unbalanced parentheses: expected ')'")
            self.advance()
            return p
        if t.kind == "END":
            self.error("unbalanced parentheses: missing ')'" if self.depth else "unexpected end of input")
        if t.text == ")":
            self.error("unbalanced parentheses: unexpected ')'")
        self.error(f"unexpected {t.text!r}")


def parse_polynomial(text: str, n: int, line: int = 1, column: int = 1) -> MultiPoly:
    """Parse ``text`` as a polynomial in ``x1..xn``.

    ``line``/``column`` give the position of ``text`` inside a larger file so
    that errors point at the right place.
    """
    p = _Parser(tokenize(text, line, column), n)
    if p.tok.kind == "END":
        p.error("empty polynomial")
    out = p.expr()
    if p.tok.kind != "END":
        if p.is_op(")"):
            p.error("unbalanced parentheses: unexpected ')'")
        p.error(f"unexpected {p.tok.text!r}")
    return out
