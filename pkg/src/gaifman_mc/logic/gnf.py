"""Gaifman-normal-form sentences: Boolean trees over basic local sentences."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Callable, Iterator, Union

from .. import backend
from ..structures import Structure
from .evaluate import eval_naive
from .parser import parse_formula
from .syntax import Formula, free_vars, to_text
from .transform import LocalityError, check_r_local


class GNFError(ValueError):
    pass


@dataclass(frozen=True)
class BasicLocalSentence:
    """``exists x1..xm (pairwise dist > 2r and psi(x1) and ... and psi(xm))``."""

    r: int
    m: int
    psi: Formula
    var: str = "x"

    def __post_init__(self):
        if self.r < 1:
            raise GNFError("leaf radius r must be >= 1")
        if self.m < 1:
            raise GNFError("leaf witness count m must be >= 1")
        extra = free_vars(self.psi) - {self.var}
        if extra:
            raise GNFError(f"psi has free variables besides {self.var!r}: {sorted(extra)}")
        if not check_r_local(self.psi, self.r, self.var):
            raise LocalityError(f"psi is not {self.r}-local in {self.var!r}: {to_text(self.psi)}")


@dataclass(frozen=True)
class GAnd:
    children: tuple


@dataclass(frozen=True)
class GOr:
    children: tuple


@dataclass(frozen=True)
class GNot:
    child: "GaifmanSentence"


GaifmanSentence = Union[BasicLocalSentence, GAnd, GOr, GNot]


def leaves(g: GaifmanSentence) -> Iterator[BasicLocalSentence]:
    if isinstance(g, BasicLocalSentence):
        yield g
    elif isinstance(g, GNot):
        yield from leaves(g.child)
    else:
        for c in g.children:
            yield from leaves(c)


def fold(g: GaifmanSentence, leaf_value: Callable[[BasicLocalSentence], bool]) -> bool:
    """Evaluate the Boolean tree; every leaf is evaluated exactly once."""
    if isinstance(g, BasicLocalSentence):
        return leaf_value(g)
    if isinstance(g, GNot):
        return not fold(g.child, leaf_value)
    values = [fold(c, leaf_value) for c in g.children]
    return all(values) if isinstance(g, GAnd) else any(values)


def eval_leaf_naive(s: Structure, leaf: BasicLocalSentence) -> bool:
    g = s.gaifman
    radius = 2 * leaf.r
    if leaf.m == 1:
        return any(eval_naive(s, leaf.psi, {leaf.var: a}) for a in range(s.n))
    sat = [a for a in range(s.n) if eval_naive(s, leaf.psi, {leaf.var: a})]
    near = {a: frozenset(backend.ball(g, [a], radius)) for a in sat}
    for combo in itertools.combinations(sat, leaf.m):
        if all(b not in near[a] for a, b in itertools.combinations(combo, 2)):
            return True
    return False


def eval_gnf_naive(s: Structure, g: GaifmanSentence) -> bool:
    """Brute-force oracle: enumerate witness tuples for every leaf."""
    return fold(g, lambda leaf: eval_leaf_naive(s, leaf))


# -- file format -----------------------------------------------------------

def gnf_from_dict(d, path: str = "$") -> GaifmanSentence:
    if not isinstance(d, dict) or "op" not in d:
        raise GNFError(f"{path}: expected an object with an 'op' field")
    op = d["op"]
    if op == "leaf":
        leaf = d.get("leaf")
        if not isinstance(leaf, dict):
            raise GNFError(f"{path}.leaf: expected an object {{r, m, psi}}")
        for key in ("r", "m", "psi"):
            if key not in leaf:
                raise GNFError(f"{path}.leaf: missing field {key!r}")
        var = leaf.get("var", "x")
        try:
            psi = parse_formula(leaf["psi"], free=[var])
        except ValueError as e:
            raise GNFError(f"{path}.leaf.psi: {e}") from None
        try:
            return BasicLocalSentence(int(leaf["r"]), int(leaf["m"]), psi, var)
        except ValueError as e:
            raise type(e)(f"{path}.leaf: {e}") from None
    children = d.get("children")
    if children is None and "child" in d:
        children = [d["child"]]
    if not isinstance(children, list) or not children:
        raise GNFError(f"{path}.children: expected a non-empty list")
    kids = tuple(gnf_from_dict(c, f"{path}.children[{i}]") for i, c in enumerate(children))
    if op == "not":
        if len(kids) != 1:
            raise GNFError(f"{path}: 'not' takes exactly one child")
        return GNot(kids[0])
    if op == "and":
        return GAnd(kids)
    if op == "or":
        return GOr(kids)
    raise GNFError(f"{path}.op: unknown operator {op!r}")


def gnf_to_dict(g: GaifmanSentence) -> dict:
    if isinstance(g, BasicLocalSentence):
        leaf = {"r": g.r, "m": g.m, "psi": to_text(g.psi)}
        if g.var != "x":
            leaf["var"] = g.var
        return {"op": "leaf", "leaf": leaf}
    if isinstance(g, GNot):
        return {"op": "not", "children": [gnf_to_dict(g.child)]}
    op = "and" if isinstance(g, GAnd) else "or"
    return {"op": op, "children": [gnf_to_dict(c) for c in g.children]}


def parse_gnf(text: str) -> GaifmanSentence:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise GNFError(f"line {e.lineno} column {e.colno}: {e.msg}") from None
    return gnf_from_dict(d)


def load_gnf(path) -> GaifmanSentence:
    with open(path, encoding="utf-8") as f:
        return parse_gnf(f.read())


def dump_gnf(g: GaifmanSentence) -> str:
    return json.dumps(gnf_to_dict(g), indent=1) + "\n"
