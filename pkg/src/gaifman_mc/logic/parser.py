"""Recursive-descent parser for the concrete formula syntax.

Grammar (lowest precedence first)::

    formula  := disj ('->' formula)?
    disj     := conj ('or' conj)*
    conj     := unary ('and' unary)*
    unary    := 'not' unary | quant | '(' formula ')' | atom
    quant    := ('exists' | 'forall') VAR ('(' formula ')' | quant)
    atom     := 'dist' '(' VAR ',' VAR ')' ('<=' | '>') INT
              | NAME '(' VAR (',' VAR)* ')'
              | VAR '=' VAR
"""
from __future__ import annotations

import re
import sys
from typing import Iterable

from .syntax import (
    KEYWORDS, And, DistGT, DistLE, Eq, Exists, Forall, Formula, Implies, Not, Or, Rel,
    free_vars,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line} column {col}: {message}")
        self.line = line
        self.col = col


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>->|<=|[()=,>]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    end = len(text.rstrip())
    while pos < end:
        m = _TOKEN.match(text, pos)
        if m is None:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            tokens.append(("bad", text[bad], bad))
            break
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("eof", "", end))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def _where(self, offset: int) -> tuple[int, int]:
        line = self.text.count("\n", 0, offset) + 1
        col = offset - (self.text.rfind("\n", 0, offset) + 1) + 1
        return line, col

    def error(self, message: str, tok=None):
        tok = tok or self.tokens[self.i]
        if tok[0] == "bad":
            message = f"unexpected character {tok[1]!r}"
        raise ParseError(message, *self._where(tok[2]))

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def accept(self, value: str) -> bool:
        kind, val, _ = self.peek()
        if kind in ("op", "name") and val == value:
            self.i += 1
            return True
        return False

    def expect(self, value: str):
        if not self.accept(value):
            tok = self.peek()
            got = repr(tok[1]) if tok[0] != "eof" else "end of input"
            self.error(f"expected {value!r}, got {got}")

    def var(self) -> str:
        kind, val, _ = self.peek()
        if kind != "name" or val in KEYWORDS:
            self.error("expected a variable")
        self.i += 1
        return sys.intern(val)

    def number(self) -> int:
        kind, val, _ = self.peek()
        if kind != "num":
            self.error("expected a non-negative integer")
        self.i += 1
        return int(val)

    # grammar

    def formula(self) -> Formula:
        left = self.disj()
        if self.accept("->"):
            return Implies(left, self.formula())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.accept("or"):
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.accept("and"):
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.accept("not"):
            return Not(self.unary())
        kind, val, _ = self.peek()
        if kind == "name" and val in ("exists", "forall"):
            return self.quant()
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        return self.atom()

    def quant(self) -> Formula:
        _, kw, _ = self.advance()
        v = self.var()
        kind, val, _ = self.peek()
        if kind == "name" and val in ("exists", "forall"):
            body = self.quant()
        else:
            if not self.accept("("):
                self.error(f"quantifier body after '{kw} {v}' must be parenthesized")
            body = self.formula()
            self.expect(")")
        return Exists(v, body) if kw == "exists" else Forall(v, body)

    def atom(self) -> Formula:
        tok = self.peek()
        kind, val, _ = tok
        if kind != "name":
            got = repr(val) if kind != "eof" else "end of input"
            self.error(f"expected a formula, got {got}")
        if val == "dist":
            self.advance()
            self.expect("(")
            x = self.var()
            self.expect(",")
            y = self.var()
            self.expect(")")
            if self.accept("<="):
                return DistLE(x, y, self.number())
            if self.accept(">"):
                return DistGT(x, y, self.number())
            self.error("expected '<=' or '>' after dist(...)")
        if val in KEYWORDS:
            self.error(f"unexpected keyword {val!r}")
        nxt = self.tokens[self.i + 1]
        if nxt[0] == "op" and nxt[1] == "(":
            self.i += 2
            args = [self.var()]
            while self.accept(","):
                args.append(self.var())
            self.expect(")")
            return Rel(sys.intern(val), tuple(args))
        left = self.var()
        self.expect("=")
        return Eq(left, self.var())


def parse_formula(text: str, free: Iterable[str] | None = None) -> Formula:
    """Parse ``text``; with ``free`` given, other free variables are an error."""
    p = _Parser(text)
    f = p.formula()
    if p.peek()[0] != "eof":
        p.error(f"unexpected {p.peek()[1]!r} after complete formula")
    if free is not None:
        unbound = sorted(free_vars(f) - set(free))
        if unbound:
            offset = _first_occurrence(text, unbound[0])
            raise ParseError(f"unbound variable {unbound[0]!r}", *p._where(offset))
    return f


def _first_occurrence(text: str, name: str) -> int:
    m = re.search(rf"\b{re.escape(name)}\b", text)
    return m.start() if m else 0
