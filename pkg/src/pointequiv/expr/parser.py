"""Recursive-descent parser for the coefficient grammar.

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('+' | '-') unary | power
    power   := primary ('^' exponent)?
    exponent:= ['-'] INT | '(' ['-'] ratlit ')'
    ratlit  := INT ['/' INT]
    primary := INT | 'x' | 'y' | NAME "'"* '(' ('x' | 'y') ')' | '(' expr ')'

Function names must be declared; ``**`` is accepted as a synonym of ``^``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError
from .tree import Const, Expr, Func, Var, add, div, mul, power

VARIABLES = ("x", "y")

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()']))")


def _tokenize(text: str):
    pos = 0
    out = []
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos + stripped]!r}",
                             text, pos + stripped)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("int", int(m.group(1)), start))
        elif m.group(2):
            out.append(("name", m.group(2), start))
        else:
            op = m.group(3)
            out.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text, functions):
        self.text = text
        self.functions = set(functions or ())
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def accept(self, op):
        t = self.peek()
        if t[0] == "op" and t[1] == op:
            self.i += 1
            return True
        return False

    def expect(self, op):
        if not self.accept(op):
            t = self.peek()
            found = "end of input" if t[0] == "end" else repr(t[1])
            self.error(f"expected {op!r}, found {found}")

    def parse(self) -> Expr:
        if self.peek()[0] == "end":
            self.error("empty expression")
        e = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return e

    def expr(self):
        terms = [self.term()]
        while True:
            if self.accept("+"):
                terms.append(self.term())
            elif self.accept("-"):
                terms.append(mul(-1, self.term()))
            else:
                return add(*terms)

    def term(self):
        out = self.unary()
        while True:
            if self.accept("*"):
                out = mul(out, self.unary())
            elif self.accept("/"):
                out = div(out, self.unary())
            else:
                return out

    def unary(self):
        if self.accept("-"):
            return mul(-1, self.unary())
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        base = self.primary()
        if self.accept("^"):
            return power(base, self.exponent())
        return base

    def exponent(self) -> Fraction:
        if self.accept("("):
            q = self.signed_ratlit()
            self.expect(")")
            return q
        # bare exponents are integers: x^2/3 means (x^2)/3
        return self.signed_ratlit(allow_slash=False)

    def signed_ratlit(self, allow_slash=True) -> Fraction:
        sign = -1 if self.accept("-") else 1
        t = self.next()
        if t[0] != "int":
            self.error("exponent must be a rational literal", t)
        q = Fraction(t[1])
        if allow_slash and self.accept("/"):
            d = self.next()
            if d[0] != "int":
                self.error("exponent must be a rational literal", d)
            if d[1] == 0:
                self.error("zero denominator in exponent", d)
            q /= d[1]
        return sign * q

    def primary(self):
        t = self.next()
        kind, val, _ = t
        if kind == "int":
            return Const(val)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "name":
            if val in VARIABLES:
                return Var(val)
            if val not in self.functions:
                self.error(f"unknown identifier {val!r}", t)
            order = 0
            while self.accept("'"):
                order += 1
            self.expect("(")
            arg = self.next()
            if arg[0] != "name" or arg[1] not in VARIABLES:
                self.error("function argument must be x or y", arg)
            self.expect(")")
            return Func(val, order, arg[1])
        if kind == "end":
            self.error("unexpected end of input", t)
        self.error(f"unexpected token {val!r}", t)


def parse(text: str, functions=()) -> Expr:
    """Parse ``text``; ``functions`` lists the admissible function names."""
    return _Parser(text, functions).parse()
