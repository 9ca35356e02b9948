"""Plain-text series literals.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INT)?
    atom   := INT | NAME | NAME "(" expr ")" | "(" expr ")"

Names are the variables passed by the caller (``x1``, ``u2``, ``y`` ...).
Division is only allowed by a nonzero constant, so ``3/4*x1`` is a rational
coefficient.  ``exp(f)`` is available for truncated series with ``f(0) = 0``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .series import TSeries

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    """Syntax or semantic error with a 1-based line and column."""

    def __init__(self, message, line, col):
        super().__init__(f"{message} at line {line}, column {col}")
        self.line = line
        self.col = col


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            j = pos
            while text[j].isspace():
                j += 1
            raise _error(text, j, f"unexpected character {text[j]!r}")
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(_Tok("int", m.group(1), start))
        elif m.group(2):
            toks.append(_Tok("name", m.group(2), start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            toks.append(_Tok("op", op, start))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


def _error(text, pos, msg):
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return ParseError(msg, line, col)


class _Parser:
    def __init__(self, text, names, trunc):
        self.text = text
        self.names = {n: i for i, n in enumerate(names)}
        self.nvars = len(names)
        self.trunc = trunc
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text):
        tok = self.take()
        if tok.text != text:
            raise _error(self.text, tok.pos, f"expected {text!r}")
        return tok

    def parse(self):
        out = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise _error(self.text, tok.pos, f"unexpected token {tok.text!r}")
        return out.truncate(self.trunc)

    def expr(self):
        acc = self.term()
        while self.peek().text in ("+", "-") and self.peek().kind == "op":
            op = self.take().text
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.unary()
        while self.peek().text in ("*", "/") and self.peek().kind == "op":
            tok = self.take()
            rhs = self.unary()
            if tok.text == "*":
                acc = acc * rhs
            else:
                if rhs.degree() > 0 or rhs.is_zero():
                    raise _error(self.text, tok.pos, "division only by a nonzero constant")
                acc = acc.scale(1 / rhs.constant_term())
        return acc

    def unary(self):
        tok = self.peek()
        if tok.kind == "op" and tok.text in ("+", "-"):
            self.take()
            val = self.unary()
            return -val if tok.text == "-" else val
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek().text == "^" and self.peek().kind == "op":
            self.take()
            tok = self.take()
            if tok.kind != "int":
                raise _error(self.text, tok.pos, "exponent must be a non-negative integer")
            base = self._cap(base ** int(tok.text))
        return base

    def _cap(self, s):
        return s.truncate(self.trunc) if self.trunc is not None else s

    def atom(self):
        tok = self.take()
        if tok.kind == "int":
            return TSeries.const(Fraction(int(tok.text)), self.nvars)
        if tok.kind == "name":
            if self.peek().text == "(":
                return self.call(tok)
            if tok.text not in self.names:
                raise _error(self.text, tok.pos, f"unknown variable {tok.text!r}")
            return TSeries.var(self.names[tok.text], self.nvars)
        if tok.text == "(":
            val = self.expr()
            self.expect(")")
            return val
        raise _error(self.text, tok.pos, f"unexpected token {tok.text or 'end of input'!r}")

    def call(self, tok):
        self.take()
        arg = self.expr()
        self.expect(")")
        if tok.text != "exp":
            raise _error(self.text, tok.pos, f"unknown function {tok.text!r}")
        if self.trunc is None:
            raise _error(self.text, tok.pos, "exp() needs a truncation order")
        if arg.constant_term() != 0:
            raise _error(self.text, tok.pos, "exp() argument must vanish at the origin")
        return exp_series(arg.truncate(self.trunc))


def exp_series(f):
    """``exp(f)`` for a truncated series with zero constant term."""
    out = TSeries.one(f.nvars, f.trunc)
    power = TSeries.one(f.nvars, f.trunc)
    for k in range(1, f.trunc + 1):
        power = power * f
        if power.is_zero():
            break
        out = out + power.scale(Fraction(1, factorial(k)))
    return out


def parse_series(text, names, trunc=None):
    """Parse ``text`` into a :class:`TSeries` over the given variable names.

    Parameters
    ----------
    text : str
        Expression in the grammar above.
    names : sequence of str
        Variable names; their order fixes the exponent positions.
    trunc : int or None
        Truncation order; ``None`` keeps exact polynomials exact.
    """
    return _Parser(str(text), list(names), trunc).parse()


def variables_in(text):
    """Identifiers in ``text`` other than function names."""
    out = []
    for tok in _tokenize(str(text)):
        if tok.kind == "name" and tok.text != "exp" and tok.text not in out:
            out.append(tok.text)
    return out
