"""Recursive-descent parser for the expression grammar.

    expr     := term (('+'|'-') term)*
    term     := unary (('*'|'/') unary)*
    unary    := '-' unary | pow
    pow      := atom ('^' exponent)?
    atom     := INTEGER | IDENT | '(' expr ')'
    exponent := ['-'] INTEGER | '(' ['-'] INTEGER '/' INTEGER ')'

Exponents are literal rationals only; anything symbolic after '^' is a
syntax error.  x and y are ordinary identifiers here, reserved for the
independent/dependent variables by the layers above.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import ExprSyntaxError
from .ast import Add, Const, Expr, Mul, Neg, Pow, Sym

_OPS = set("+-*/^()")


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.items: list[tuple[str, str, int]] = []  # (kind, value, position)
        i, n = 0, len(text)
        while i < n:
            c = text[i]
            if c.isspace():
                i += 1
                continue
            if c.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                if j < n and text[j] == ".":
                    raise ExprSyntaxError("decimal literals are not supported", j)
                self.items.append(("int", text[i:j], i))
                i = j
                continue
            if c.isalpha():
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.items.append(("ident", text[i:j], i))
                i = j
                continue
            if c in _OPS:
                self.items.append(("op", c, i))
                i += 1
                continue
            raise ExprSyntaxError(f"unexpected character {c!r}", i)
        self.items.append(("end", "", n))
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.items[self.pos]

    def next(self) -> tuple[str, str, int]:
        t = self.items[self.pos]
        self.pos += 1
        return t

    def expect_op(self, op: str) -> None:
        kind, value, position = self.next()
        if kind != "op" or value != op:
            raise ExprSyntaxError(f"expected {op!r}, found {value or 'end of input'!r}", position)


def parse(text: str) -> Expr:
    """Parse an expression string; raises ExprSyntaxError with a position."""
    toks = _Tokens(text)
    e = _expr(toks)
    kind, value, position = toks.peek()
    if kind != "end":
        raise ExprSyntaxError(f"unexpected trailing input {value!r}", position)
    return e


def _expr(toks: _Tokens) -> Expr:
    terms = [_term(toks)]
    while True:
        kind, value, _ = toks.peek()
        if kind == "op" and value in "+-":
            toks.next()
            t = _term(toks)
            terms.append(Neg(t) if value == "-" else t)
        else:
            break
    return terms[0] if len(terms) == 1 else Add(tuple(terms))


def _term(toks: _Tokens) -> Expr:
    factors = [_unary(toks)]
    while True:
        kind, value, _ = toks.peek()
        if kind == "op" and value in "*/":
            toks.next()
            f = _unary(toks)
            factors.append(Pow(f, Fraction(-1)) if value == "/" else f)
        else:
            break
    return factors[0] if len(factors) == 1 else Mul(tuple(factors))


def _unary(toks: _Tokens) -> Expr:
    kind, value, _ = toks.peek()
    if kind == "op" and value == "-":
        toks.next()
        return Neg(_unary(toks))
    return _pow(toks)


def _pow(toks: _Tokens) -> Expr:
    base = _atom(toks)
    kind, value, _ = toks.peek()
    if kind == "op" and value == "^":
        toks.next()
        return Pow(base, _exponent(toks))
    return base


def _atom(toks: _Tokens) -> Expr:
    kind, value, position = toks.next()
    if kind == "int":
        return Const(Fraction(int(value)))
    if kind == "ident":
        return Sym(value)
    if kind == "op" and value == "(":
        e = _expr(toks)
        toks.expect_op(")")
        return e
    raise ExprSyntaxError(f"expected a value, found {value or 'end of input'!r}", position)


def _exponent(toks: _Tokens) -> Fraction:
    kind, value, position = toks.peek()
    if kind == "int" or (kind == "op" and value == "-"):
        return Fraction(_signed_int(toks))
    if kind == "op" and value == "(":
        toks.next()
        num = _signed_int(toks)
        toks.expect_op("/")
        kind, value, position = toks.next()
        if kind != "int":
            raise ExprSyntaxError("expected an integer denominator", position)
        den = int(value)
        toks.expect_op(")")
        if den == 0:
            raise ExprSyntaxError("zero denominator in exponent", position)
        return Fraction(num, den)
    raise ExprSyntaxError("exponents must be literal integers or (p/q) rationals", position)


def _signed_int(toks: _Tokens) -> int:
    kind, value, position = toks.next()
    sign = 1
    if kind == "op" and value == "-":
        sign = -1
        kind, value, position = toks.next()
    if kind != "int":
        raise ExprSyntaxError("expected an integer", position)
    return sign * int(value)
