"""Relativization to balls, the syntactic locality check, and distance formulas."""
from __future__ import annotations

import itertools

from ..structures import Vocabulary
from .syntax import (
    ATOMS, BINARY, And, DistGT, DistLE, Eq, Exists, Forall, Formula, Implies, Not, Rel, disj,
    free_vars, subformulas,
)


class LocalityError(ValueError):
    pass


def relativize(phi: Formula, r: int, x: str = "x") -> Formula:
    """Guard every quantifier of ``phi`` by ``dist(x, y) <= r``.

    ``exists y (b)`` becomes ``exists y (dist(x,y) <= r and b)`` and
    ``forall y (b)`` becomes ``forall y (dist(x,y) <= r -> b)``.
    Distance atoms must mention ``x``: between two other variables the
    Gaifman distance may leave the ball.
    """
    if r < 0:
        raise ValueError("radius must be >= 0")

    def go(f: Formula) -> Formula:
        if isinstance(f, (DistLE, DistGT)):
            if x not in (f.x, f.y):
                raise LocalityError(f"distance atom {f} does not mention {x!r}")
            return f
        if isinstance(f, ATOMS):
            return f
        if isinstance(f, Not):
            return Not(go(f.arg))
        if isinstance(f, BINARY):
            return type(f)(go(f.left), go(f.right))
        if f.var == x:
            raise LocalityError(f"variable {x!r} is captured by a quantifier")
        if isinstance(f, Exists):
            return Exists(f.var, And(DistLE(x, f.var, r), go(f.body)))
        return Forall(f.var, Implies(DistLE(x, f.var, r), go(f.body)))

    return go(phi)


def check_r_local(phi: Formula, r: int, x: str = "x") -> bool:
    """True iff ``phi`` has the exact shape produced by :func:`relativize`."""

    def go(f: Formula) -> bool:
        if isinstance(f, (DistLE, DistGT)):
            return x in (f.x, f.y)
        if isinstance(f, ATOMS):
            return True
        if isinstance(f, Not):
            return go(f.arg)
        if isinstance(f, BINARY):
            return go(f.left) and go(f.right)
        if f.var == x:
            return False
        guard_type = And if isinstance(f, Exists) else Implies
        body = f.body
        if not isinstance(body, guard_type):
            return False
        if body.left != DistLE(x, f.var, r):
            return False
        return go(body.right)

    return go(phi)


def unrelativize(psi: Formula, r: int, x: str = "x") -> Formula:
    """Inverse of :func:`relativize` on r-local formulas."""
    if not check_r_local(psi, r, x):
        raise LocalityError("formula is not r-local")

    def go(f):
        if isinstance(f, ATOMS):
            return f
        if isinstance(f, Not):
            return Not(go(f.arg))
        if isinstance(f, BINARY):
            return type(f)(go(f.left), go(f.right))
        return type(f)(f.var, go(f.body.right))

    return go(psi)


class _Fresh:
    def __init__(self, avoid):
        self.avoid = set(avoid)
        self.counter = itertools.count(1)

    def __call__(self) -> str:
        while True:
            name = f"_z{next(self.counter)}"
            if name not in self.avoid:
                self.avoid.add(name)
                return name


def expand_distance_atom(r: int, x: str, y: str, vocab: Vocabulary, _fresh=None) -> Formula:
    """Pure first-order formula equivalent to ``dist(x, y) <= r`` over ``vocab``.

    ``d0 = (x = y)``; ``d1`` adds every atom placing ``x`` and ``y`` in two
    distinct positions, the remaining positions existentially quantified;
    ``d_r = d0 or d1 or exists z (d_ceil(r/2)(x,z) and d_floor(r/2)(z,y))``.
    """
    if r < 0:
        raise ValueError("radius must be >= 0")
    fresh = _fresh or _Fresh({x, y})
    d0 = Eq(x, y)
    if r == 0:
        return d0
    if r == 1:
        return disj(d0, *_adjacency_atoms(x, y, vocab, fresh))
    z = fresh()
    a, b = (r + 1) // 2, r // 2
    mid = Exists(
        z,
        And(
            expand_distance_atom(a, x, z, vocab, fresh),
            expand_distance_atom(b, z, y, vocab, fresh),
        ),
    )
    return disj(d0, expand_distance_atom(1, x, y, vocab, fresh), mid)


def _adjacency_atoms(x, y, vocab, fresh):
    out = []
    for name, arity in vocab.symbols:
        if arity < 2:
            continue
        zs = [fresh() for _ in range(arity - 2)]
        placed = []
        for i, j in itertools.permutations(range(arity), 2):
            args = [None] * arity
            args[i], args[j] = x, y
            it = iter(zs)
            args = [a if a is not None else next(it) for a in args]
            placed.append(Rel(name, tuple(args)))
        body = disj(*placed)
        for z in reversed(zs):
            body = Exists(z, body)
        out.append(body)
    return out


def substitute_distance_atoms(phi: Formula, vocab: Vocabulary) -> Formula:
    """Replace every built-in distance atom by its first-order expansion."""
    names = set()
    for f in subformulas(phi):
        if isinstance(f, (Exists, Forall)):
            names.add(f.var)
    names |= free_vars(phi)
    fresh = _Fresh(names)

    def go(f):
        if isinstance(f, DistLE):
            return expand_distance_atom(f.r, f.x, f.y, vocab, fresh)
        if isinstance(f, DistGT):
            return Not(expand_distance_atom(f.r, f.x, f.y, vocab, fresh))
        if isinstance(f, ATOMS):
            return f
        if isinstance(f, Not):
            return Not(go(f.arg))
        if isinstance(f, BINARY):
            return type(f)(go(f.left), go(f.right))
        return type(f)(f.var, go(f.body))

    return go(phi)

