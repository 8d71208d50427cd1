"""Operator expressions: tokenizer, recursive-descent parser, printer, evaluator.

Grammar (precedence: scalar multiplication > ^ > o > + -, left associative)::

    expr := sum
    sum  := prod (("+" | "-") prod)*
    prod := [scalar "*"] comp
    comp := pow ("o" pow)*
    pow  := atom ["^" nat]
    atom := "U" | "D" | "I" | "partial" | "integ"
          | "com(" expr "," expr ")" | "(" expr ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .freemodule import Operator, commutator, named_operator, op_combine
from .ring import CapabilityError, Ring, RingError

__all__ = [
    "ParseError",
    "Atom",
    "Scale",
    "BinOp",
    "Compose",
    "Power",
    "Commutator",
    "parse",
    "to_text",
    "evaluate",
]

ATOMS = ("U", "D", "I", "partial", "integ")


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int, expected: tuple = ()):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        exp = f"; expected one of {', '.join(expected)}" if expected else ""
        super().__init__(f"line {line}, column {col}: {message}{exp}")
        self.line = line
        self.column = col
        self.expected = expected


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Scale:
    scalar: Fraction
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # "+" or "-"
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Compose:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Power:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Commutator:
    left: "Expr"
    right: "Expr"


Expr = Union[Atom, Scale, BinOp, Compose, Power, Commutator]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        num, ident, sym = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            toks.append(("num", num, start))
        elif ident is not None:
            toks.append(("ident", ident, start))
        else:
            if sym not in "+-*/^(),":
                raise ParseError(f"unexpected character {sym!r}", text, start)
            toks.append((sym, sym, start))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, expected: tuple):
        kind, val, pos = self.peek()
        what = "end of input" if kind == "eof" else repr(val)
        raise ParseError(f"unexpected {what}", self.text, pos, expected)

    def expect(self, kind: str):
        if self.peek()[0] != kind:
            self.fail((repr(kind),))
        return self.take()

    def parse(self) -> Expr:
        e = self.sum()
        if self.peek()[0] != "eof":
            self.fail(("'+'", "'-'", "'o'", "end of input"))
        return e

    def sum(self) -> Expr:
        e = self.prod()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            e = BinOp(op, e, self.prod())
        return e

    def prod(self) -> Expr:
        if self.peek()[0] == "num":
            num = int(self.take()[1])
            den = 1
            if self.peek()[0] == "/":
                self.take()
                den = int(self.expect("num")[1])
                if den == 0:
                    raise ParseError("zero denominator", self.text, self.toks[self.i - 1][2])
            self.expect("*")
            return Scale(Fraction(num, den), self.comp())
        return self.comp()

    def comp(self) -> Expr:
        e = self.pow()
        while self.peek()[:2] == ("ident", "o"):
            self.take()
            e = Compose(e, self.pow())
        return e

    def pow(self) -> Expr:
        e = self.atom()
        if self.peek()[0] == "^":
            self.take()
            e = Power(e, int(self.expect("num")[1]))
        return e

    def atom(self) -> Expr:
        kind, val, _ = self.peek()
        if kind == "ident" and val in ATOMS:
            self.take()
            return Atom(val)
        if kind == "ident" and val == "com":
            self.take()
            self.expect("(")
            a = self.sum()
            self.expect(",")
            b = self.sum()
            self.expect(")")
            return Commutator(a, b)
        if kind == "(":
            self.take()
            e = self.sum()
            self.expect(")")
            return e
        self.fail(tuple(f"'{a}'" for a in ATOMS) + ("'com('", "'('"))


def parse(text: str) -> Expr:
    return _Parser(text).parse()


def to_text(e: Expr) -> str:
    """Print an expression so that ``parse(to_text(e)) == e``."""
    if isinstance(e, Atom):
        return e.name
    if isinstance(e, Commutator):
        return f"com({to_text(e.left)}, {to_text(e.right)})"
    if isinstance(e, Power):
        return f"{_wrap(e.base, atom_only=True)}^{e.exponent}"
    if isinstance(e, Compose):
        right = _wrap(e.right, level=2, strict=True)
        return f"{_wrap(e.left, level=2)} o {right}"
    if isinstance(e, Scale):
        s = e.scalar
        lit = str(s.numerator) if s.denominator == 1 else f"{s.numerator}/{s.denominator}"
        if s < 0:
            raise ValueError("negative scalars have no literal form; use subtraction")
        return f"{lit} * {_wrap(e.arg, level=2)}"
    if isinstance(e, BinOp):
        return f"{to_text(e.left)} {e.op} {_wrap(e.right, level=1)}"
    raise TypeError(e)


def _level(e: Expr) -> int:
    if isinstance(e, BinOp):
        return 0
    if isinstance(e, Scale):
        return 1
    if isinstance(e, Compose):
        return 2
    if isinstance(e, Power):
        return 3
    return 4


def _wrap(e: Expr, level: int = 4, strict: bool = False, atom_only: bool = False) -> str:
    s = to_text(e)
    lv = _level(e)
    if atom_only:
        return s if lv == 4 else f"({s})"
    if lv < level or (strict and lv == level):
        return f"({s})"
    return s


def evaluate(e: Expr, ring: Ring) -> Operator:
    """Build the operator denoted by ``e`` over ``ring``."""
    if isinstance(e, Atom):
        try:
            return named_operator(e.name, ring)
        except CapabilityError as exc:
            raise CapabilityError(f"{e.name}: {exc}") from None
    if isinstance(e, Scale):
        try:
            alpha = ring(e.scalar)
        except RingError as exc:
            raise CapabilityError(f"scalar {e.scalar}: {exc}") from None
        return op_combine("scale", evaluate(e.arg, ring), alpha)
    if isinstance(e, BinOp):
        a, b = evaluate(e.left, ring), evaluate(e.right, ring)
        return a + b if e.op == "+" else a - b
    if isinstance(e, Compose):
        return evaluate(e.left, ring) @ evaluate(e.right, ring)
    if isinstance(e, Power):
        return evaluate(e.base, ring) ** e.exponent
    if isinstance(e, Commutator):
        return commutator(evaluate(e.left, ring), evaluate(e.right, ring))
    raise TypeError(e)
