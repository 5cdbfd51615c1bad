"""Recursive-descent parser for the input expression language.

Grammar (usual precedence, ^ binds tightest, exponents are integer
literals):

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' exponent)?
    atom   := INT | NAME | '(' expr ')'
    exponent := ['-'] INT | '(' ['-'] INT ')'

Parsing evaluates directly into a target field, so the result is already
in canonical form and round-trips bit-exactly through ``to_string``.
"""

import re

from .errors import ExprSyntaxError, UnknownVariable

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([+\-*/^()]))")


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = pos + (len(text) - pos - len(stripped))
            raise ExprSyntaxError(f"unexpected character {stripped[0]!r}", at)
        number, name, op = m.groups()
        if number is not None:
            tokens.append(("int", int(number), m.start(1)))
        elif name is not None:
            tokens.append(("name", name, m.start(2)))
        else:
            tokens.append(("op", op, m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, field, text):
        self.field = field
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.variables = {name: field.var(name) for name in field.names}

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, value, pos = self.peek()
        if kind != "op" or value != op:
            raise ExprSyntaxError(f"expected {op!r}", pos)
        self.advance()

    def parse(self):
        value = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError("trailing input", pos)
        return value

    def expr(self):
        value = self.term()
        while True:
            kind, op, _ = self.peek()
            if kind == "op" and op in "+-":
                self.advance()
                rhs = self.term()
                value = value + rhs if op == "+" else value - rhs
            else:
                return value

    def term(self):
        value = self.unary()
        while True:
            kind, op, pos = self.peek()
            if kind == "op" and op in "*/":
                self.advance()
                rhs = self.unary()
                if op == "*":
                    value = value * rhs
                else:
                    if rhs.is_zero():
                        raise ExprSyntaxError("division by zero", pos)
                    value = value / rhs
            else:
                return value

    def unary(self):
        kind, op, _ = self.peek()
        if kind == "op" and op == "-":
            self.advance()
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        kind, op, pos = self.peek()
        if kind == "op" and op == "^":
            self.advance()
            n = self.exponent()
            if n < 0 and base.is_zero():
                raise ExprSyntaxError("zero raised to a negative power", pos)
            return base ** n
        return base

    def exponent(self):
        kind, value, pos = self.peek()
        if kind == "op" and value == "(":
            self.advance()
            n = self.exponent()
            self.expect_op(")")
            return n
        sign = 1
        if kind == "op" and value == "-":
            self.advance()
            sign = -1
            kind, value, pos = self.peek()
        if kind != "int":
            raise ExprSyntaxError("expected an integer exponent", pos)
        self.advance()
        return sign * value

    def atom(self):
        kind, value, pos = self.advance()
        if kind == "int":
            return self.field.from_int(value)
        if kind == "name":
            try:
                return self.variables[value]
            except KeyError:
                raise UnknownVariable(f"unknown variable {value!r}", pos) from None
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ExprSyntaxError("expected a value", pos)


def parse_expression(field, text):
    """Parse ``text`` into an element of ``field``."""
    return _Parser(field, text).parse()
