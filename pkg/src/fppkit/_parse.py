"""Recursive-descent parser for coefficient and polynomial expressions.

Grammar (a superset of the documented file grammar)::

    expr   := sign? term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := sign factor | atom (('^' | '**') INT)?
    atom   := INT | NAME | 'sqrt' '(' sign? INT ')' | '(' expr ')'

``r`` denotes the formal square root of the ring's ``d`` unless ``r`` is a
declared variable; ``i*sqrt(n)`` is read as ``sqrt(-n)``.
"""

from __future__ import annotations

import re

from .errors import CoefficientNotInRing, PolySyntaxError, UnknownVariable

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<pow>\*\*|\^)|(?P<op>[-+*/()])"
)


def _tokenize(text, line0=1):
    tokens = []
    pos, line, line_start = 0, line0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise PolySyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1, text)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind != "ws":
            tokens.append((kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(("end", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text, ring, lookup, line0=1):
        self.text = text
        self.ring = ring
        self.lookup = lookup
        self.toks = _tokenize(text, line0)
        self.i = 0

    def peek(self, k=0):
        return self.toks[self.i + k]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise PolySyntaxError(msg, tok[2], tok[3], self.text)

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            self.fail(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok)
        return tok

    def const(self, value, tok):
        try:
            return self.ring(value)
        except CoefficientNotInRing as exc:
            raise CoefficientNotInRing(f"{exc} (line {tok[2]}, column {tok[3]})") from None

    def root(self, d, tok):
        try:
            return self.ring.root(d)
        except CoefficientNotInRing as exc:
            raise CoefficientNotInRing(f"{exc} (line {tok[2]}, column {tok[3]})") from None

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return value

    def expr(self):
        neg = False
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            neg = self.take()[1] == "-"
        value = self.term()
        if neg:
            value = -value
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            tok = self.take()
            rhs = self.factor()
            if tok[1] == "*":
                value = value * rhs
            else:
                try:
                    value = value / rhs
                except ZeroDivisionError:
                    if hasattr(self.ring, "modulus"):
                        raise CoefficientNotInRing(
                            f"division by a non-unit of {self.ring.tag} (line {tok[2]}, column {tok[3]})") from None
                    self.fail("division by zero", tok)
                except TypeError:
                    self.fail("division by a non-constant", tok)
        return value

    def factor(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            value = self.factor()
            return -value if tok[1] == "-" else value
        value = self.atom()
        if self.peek()[0] == "pow":
            self.take()
            etok = self.take()
            if etok[0] != "int":
                self.fail("exponent must be a nonnegative integer", etok)
            value = value ** int(etok[1])
        return value

    def _sqrt_arg(self):
        self.expect("(")
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        tok = self.take()
        if tok[0] != "int":
            self.fail("sqrt expects an integer argument", tok)
        self.expect(")")
        return sign * int(tok[1])

    def atom(self):
        tok = self.take()
        kind, val = tok[0], tok[1]
        if kind == "int":
            return self.const(int(val), tok)
        if kind == "op" and val == "(":
            value = self.expr()
            self.expect(")")
            return value
        if kind == "name":
            found = self.lookup(val)
            if found is not None:
                return found
            if val == "r":
                return self.root(getattr(self.ring, "d", None), tok)
            if val == "sqrt":
                return self.root(self._sqrt_arg(), tok)
            if val in ("i", "I") and self.peek()[1] == "*" and self.peek(1)[1] == "sqrt":
                self.take()
                self.take()
                return self.root(-self._sqrt_arg(), tok)
            raise UnknownVariable(f"unknown variable {val!r} (line {tok[2]}, column {tok[3]})")
        self.fail(f"unexpected {val or 'end of input'!r}", tok)


def parse_constant(text, ring, line0=1):
    return _Parser(text, ring, lambda name: None, line0).parse()


def parse_expression(text, ring, lookup, line0=1):
    return _Parser(text, ring, lookup, line0).parse()
