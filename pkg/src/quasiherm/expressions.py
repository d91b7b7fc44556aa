"""Small recursive-descent parser for real functions of x.

Grammar, lowest to highest precedence:

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" unary)?          right-associative
    atom   := NUMBER | "x" | NAME "(" expr ")" | "(" expr ")"

so "-x^2" is -(x^2) and "x^2^3" is x^(2^3).  Domain violations surface at
evaluation time with the offending sample point.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import EvalError, ParseError

FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "log": math.log,
    "tanh": math.tanh,
    "cosh": math.cosh,
    "sinh": math.sinh,
    "sqrt": math.sqrt,
    "abs": abs,
}

_TOKEN = re.compile(r"""
    (?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[()+\-*/^])
  | (?P<ws>\s+)
""", re.VERBOSE)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


# AST nodes are plain tuples:
#   ("num", value) ("var",) ("call", name, arg)
#   ("neg", arg)   ("bin", op, lhs, rhs)


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.peek()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)
        self.take()

    def parse(self):
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected trailing input {val!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                node = ("bin", val, node, self.term())
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                node = ("bin", val, node, self.unary())
            else:
                return node

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return ("neg", self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            node = ("bin", "^", node, self.unary())
        return node

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return ("num", float(val))
        if kind == "name":
            if val == "x":
                return ("var",)
            if val in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return ("call", val, arg)
            raise ParseError(f"unknown name {val!r}", pos)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError(f"unexpected token {val!r}", pos)


def _eval(node, x: float) -> float:
    tag = node[0]
    if tag == "num":
        return node[1]
    if tag == "var":
        return x
    if tag == "neg":
        return -_eval(node[1], x)
    if tag == "call":
        arg = _eval(node[2], x)
        try:
            return float(FUNCTIONS[node[1]](arg))
        except (ValueError, OverflowError) as exc:
            raise EvalError(f"{node[1]}({arg!r}): {exc}", x) from exc
    _, op, lhs, rhs = node
    a = _eval(lhs, x)
    b = _eval(rhs, x)
    try:
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            return a / b
        result = a ** b
    except ZeroDivisionError as exc:
        raise EvalError(f"division by zero", x) from exc
    except OverflowError as exc:
        raise EvalError(f"overflow in {a!r} ^ {b!r}", x) from exc
    if isinstance(result, complex):
        raise EvalError(f"{a!r} ^ {b!r} is not real", x)
    return result


def _to_text(node) -> str:
    tag = node[0]
    if tag == "num":
        return format(node[1], ".17g")
    if tag == "var":
        return "x"
    if tag == "neg":
        return f"(-{_to_text(node[1])})"
    if tag == "call":
        return f"{node[1]}({_to_text(node[2])})"
    _, op, lhs, rhs = node
    return f"({_to_text(lhs)} {op} {_to_text(rhs)})"


@dataclass(frozen=True)
class Expression:
    """Parsed real function of x; callable on scalars, sampleable on arrays."""

    text: str
    ast: tuple

    def __call__(self, x: float) -> float:
        return _eval(self.ast, float(x))

    def __str__(self) -> str:
        return _to_text(self.ast)

    def sample(self, xs) -> np.ndarray:
        return np.array([_eval(self.ast, float(x)) for x in np.asarray(xs).ravel()])


def parse_expression(text: str) -> Expression:
    """Parse expression text into an evaluable real function of x."""
    if not text or not text.strip():
        raise ParseError("empty expression", 0)
    return Expression(text, _Parser(text).parse())
