"""Recursive-descent parser for the polynomial expression grammar.

Grammar (whitespace ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := "-" unary | power
    power  := atom ("^" INT)?
    atom   := INT ("/" INT)? | NAME | "(" expr ")"
    NAME   := [a-z][0-9]*

There is no implicit multiplication and no unary plus.  The parser is
generic: names and literals are turned into values by callbacks, and the
values only need ``+ - * **`` and unary minus.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, TypeVar

from .errors import ParseError

T = TypeVar("T")


class _Parser:
    def __init__(self, text, name, literal):
        self.text = text
        self.pos = 0
        self.name = name
        self.literal = literal

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def fail(self, message):
        raise ParseError(message, self.pos)

    def integer(self):
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("expected integer")
        return int(self.text[start:self.pos])

    def parse(self):
        if not self.text.strip():
            self.fail("empty expression")
        value = self.expr()
        if self.peek():
            self.fail(f"unexpected {self.peek()!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() == "*":
            self.pos += 1
            value = value * self.unary()
        return value

    def unary(self):
        if self.peek() == "-":
            self.pos += 1
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            self.skip()
            exponent = self.integer()
            if self.peek() == "^":
                self.fail("chained exponent")
            return base**exponent
        return base

    def atom(self):
        c = self.peek()
        start = self.pos
        if c.isdigit():
            num = self.integer()
            if self.pos < len(self.text) and self.text[self.pos] == "/":
                self.pos += 1
                if self.pos >= len(self.text) or not self.text[self.pos].isdigit():
                    self.fail("expected denominator")
                den = self.integer()
                if den == 0:
                    raise ParseError("division by zero", start)
                return self.literal(Fraction(num, den), start)
            return self.literal(Fraction(num), start)
        if "a" <= c <= "z":
            self.pos += 1
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            return self.name(self.text[start:self.pos], start)
        if c == "(":
            self.pos += 1
            value = self.expr()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.pos += 1
            return value
        if not c:
            self.fail("unexpected end of input")
        self.fail(f"unexpected {c!r}")


def parse_expression(
    text: str,
    name: Callable[[str, int], T],
    literal: Callable[[Fraction, int], T],
) -> T:
    """Parse ``text``; ``name(ident, offset)`` and ``literal(frac, offset)`` build leaves."""
    return _Parser(text, name, literal).parse()
