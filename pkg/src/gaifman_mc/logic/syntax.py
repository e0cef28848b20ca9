"""First-order formula AST and pretty-printer.

Connectives are binary nodes; the printer parenthesizes every binary
connective, so ``parse(to_text(f)) == f`` for every AST.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union


@dataclass(frozen=True)
class Rel:
    symbol: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class DistLE:
    """``d(x, y) <= r`` in the Gaifman graph."""

    x: str
    y: str
    r: int


@dataclass(frozen=True)
class DistGT:
    x: str
    y: str
    r: int


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


Formula = Union[Rel, Eq, DistLE, DistGT, Not, And, Or, Implies, Exists, Forall]
ATOMS = (Rel, Eq, DistLE, DistGT)
BINARY = (And, Or, Implies)
QUANTIFIERS = (Exists, Forall)

KEYWORDS = frozenset({"exists", "forall", "and", "or", "not", "dist"})


def conj(*fs: Formula) -> Formula:
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(*fs: Formula) -> Formula:
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def atom_vars(f) -> tuple[str, ...]:
    if isinstance(f, Rel):
        return f.args
    if isinstance(f, Eq):
        return (f.left, f.right)
    return (f.x, f.y)


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, ATOMS):
        return frozenset(atom_vars(f))
    if isinstance(f, Not):
        return free_vars(f.arg)
    if isinstance(f, BINARY):
        return free_vars(f.left) | free_vars(f.right)
    return free_vars(f.body) - {f.var}


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Not):
        yield from subformulas(f.arg)
    elif isinstance(f, BINARY):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, QUANTIFIERS):
        yield from subformulas(f.body)


def quantifier_depth(f: Formula) -> int:
    if isinstance(f, ATOMS):
        return 0
    if isinstance(f, Not):
        return quantifier_depth(f.arg)
    if isinstance(f, BINARY):
        return max(quantifier_depth(f.left), quantifier_depth(f.right))
    return 1 + quantifier_depth(f.body)


_OPS = {And: "and", Or: "or", Implies: "->"}


def to_text(f: Formula) -> str:
    return _fmt(f, top=True)


def _fmt(f: Formula, top: bool = False) -> str:
    if isinstance(f, Rel):
        return f"{f.symbol}({','.join(f.args)})"
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, DistLE):
        return f"dist({f.x},{f.y}) <= {f.r}"
    if isinstance(f, DistGT):
        return f"dist({f.x},{f.y}) > {f.r}"
    if isinstance(f, Not):
        return "not " + _fmt(f.arg)
    if isinstance(f, BINARY):
        s = f"{_fmt(f.left)} {_OPS[type(f)]} {_fmt(f.right)}"
        return s if top else f"({s})"
    kw = "exists" if isinstance(f, Exists) else "forall"
    return f"{kw} {f.var} ({_fmt(f.body, top=True)})"
