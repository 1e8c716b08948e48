"""Endpoint-expression mini-language.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := "-" factor | power
    power  := atom ["^" int]
    atom   := number | ident | "abs(" expr ")" | "ln(" expr ")" | "sqrt(" expr ")"
            | "norm()" | "pow(" expr "," int ")" | "(" expr ")"
    ident  := "y" | "y1" ... "yn"

Expressions evaluate on a batch of points, an ``(m, n)`` array, and return an
``(m,)`` float array.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import ExpressionDomainError, IvfSyntaxError

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    col: int


def tokenize(text: str, line: int | None = None, col_offset: int = 0) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise IvfSyntaxError(f"unexpected character {text[pos]!r}", line, col_offset + pos + 1)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), col_offset + pos + 1))
        pos = m.end()
    tokens.append(Token("end", "", col_offset + len(text) + 1))
    return tokens


class Expr:
    def eval(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def variables(self) -> set[int]:
        return set()


@dataclass(frozen=True)
class Const(Expr):
    value: float

    def eval(self, points):
        return np.full(points.shape[0], self.value, dtype=float)

    def __str__(self) -> str:
        return repr(self.value)


@dataclass(frozen=True)
class Var(Expr):
    index: int  # zero-based

    def eval(self, points):
        return points[:, self.index].astype(float, copy=False)

    def variables(self):
        return {self.index}

    def __str__(self) -> str:
        return f"y{self.index + 1}"


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr

    def eval(self, points):
        return -self.arg.eval(points)

    def variables(self):
        return self.arg.variables()

    def __str__(self) -> str:
        return f"-({self.arg})"


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr

    def eval(self, points):
        a = self.left.eval(points)
        b = self.right.eval(points)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        if np.any(b == 0):
            raise ExpressionDomainError(f"division by zero in {self}")
        return a / b

    def variables(self):
        return self.left.variables() | self.right.variables()

    def __str__(self) -> str:
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Call(Expr):
    fn: str
    arg: Expr

    def eval(self, points):
        x = self.arg.eval(points)
        if self.fn == "abs":
            return np.abs(x)
        if self.fn == "ln":
            if np.any(x <= 0):
                raise ExpressionDomainError(f"ln of a non-positive value in {self}")
            return np.log(x)
        if np.any(x < 0):
            raise ExpressionDomainError(f"sqrt of a negative value in {self}")
        return np.sqrt(x)

    def variables(self):
        return self.arg.variables()

    def __str__(self) -> str:
        return f"{self.fn}({self.arg})"


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def eval(self, points):
        x = self.base.eval(points)
        if self.exponent < 0 and np.any(x == 0):
            raise ExpressionDomainError(f"negative power of zero in {self}")
        return x ** float(self.exponent) if self.exponent < 0 else x ** self.exponent

    def variables(self):
        return self.base.variables()

    def __str__(self) -> str:
        return f"pow({self.base}, {self.exponent})"


@dataclass(frozen=True)
class Norm(Expr):
    def eval(self, points):
        return np.sqrt(np.sum(points.astype(float) ** 2, axis=1))

    def __str__(self) -> str:
        return "norm()"


class _Parser:
    def __init__(self, text: str, dim: int, line: int | None, col_offset: int):
        self.tokens = tokenize(text, line, col_offset)
        self.pos = 0
        self.dim = dim
        self.line = line

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        return IvfSyntaxError(message, self.line, tok.col)

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text != text:
            found = tok.text or "end of expression"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def parse(self) -> Expr:
        if self.peek().kind == "end":
            raise self.error("empty expression")
        node = self.expr()
        if self.peek().kind != "end":
            raise self.error(f"unexpected token {self.peek().text!r}")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek().text in ("+", "-"):
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek().text in ("*", "/"):
            op = self.advance().text
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        if self.peek().text == "-":
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek().text == "^":
            self.advance()
            return Pow(base, self.integer())
        return base

    def integer(self) -> int:
        sign = 1
        if self.peek().text == "-":
            self.advance()
            sign = -1
        tok = self.advance()
        if tok.kind != "number" or not tok.text.isdigit():
            raise self.error(f"expected an integer exponent, found {tok.text!r}", tok)
        return sign * int(tok.text)

    def atom(self) -> Expr:
        tok = self.advance()
        if tok.kind == "number":
            return Const(float(tok.text))
        if tok.text == "(":
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "ident":
            name = tok.text
            if name in ("abs", "ln", "sqrt"):
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(name, arg)
            if name == "pow":
                self.expect("(")
                base = self.expr()
                self.expect(",")
                k = self.integer()
                self.expect(")")
                return Pow(base, k)
            if name == "norm":
                self.expect("(")
                self.expect(")")
                return Norm()
            if name == "y":
                return Var(0)
            m = re.fullmatch(r"y([1-9]\d*)", name)
            if m:
                idx = int(m.group(1))
                if idx > self.dim:
                    raise self.error(f"variable {name} exceeds dimension {self.dim}", tok)
                return Var(idx - 1)
            raise self.error(f"unknown identifier {name!r}", tok)
        found = tok.text or "end of expression"
        raise self.error(f"unexpected token {found!r}", tok)


def parse_expr(text: str, dim: int = 1, line: int | None = None, col_offset: int = 0) -> Expr:
    return _Parser(text, dim, line, col_offset).parse()
