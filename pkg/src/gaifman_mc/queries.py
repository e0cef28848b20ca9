"""Ready-made sentences used by the CLI, the benchmarks and the tests."""
from __future__ import annotations

from . import backend
from .logic.gnf import BasicLocalSentence
from .logic.syntax import Eq, Exists, Forall, Formula, Implies, Not, Rel, conj, disj
from .logic.transform import relativize
from .structures import Structure


def set_cover_sentence(c: int) -> Formula:
    """``exists x1..xc forall y (P(y) -> E(y,x1) or ... or E(y,xc))``."""
    if c < 1:
        raise ValueError("c must be >= 1")
    xs = [f"x{i}" for i in range(1, c + 1)]
    body: Formula = Forall("y", Implies(Rel("P", ("y",)), disj(*(Rel("E", ("y", x)) for x in xs))))
    for x in reversed(xs):
        body = Exists(x, body)
    return body


def diameter(s: Structure) -> int:
    """Largest finite distance; raises if the Gaifman graph is disconnected."""
    g = s.gaifman
    best = 0
    for a in range(s.n):
        d = backend.distances(g, a, s.n)
        if len(d) < s.n:
            raise ValueError("structure is not connected")
        best = max(best, max(d.values()))
    return best


def set_cover_gnf(s: Structure, c: int, center: str = "c") -> BasicLocalSentence:
    """Single-leaf form of :func:`set_cover_sentence` for a connected ``s``.

    With radius at least the diameter every ball is the whole structure, so
    ``exists center psi(center)`` for the relativized sentence ``psi`` is
    equivalent to the sentence itself.
    """
    r = max(1, diameter(s))
    psi = relativize(set_cover_sentence(c), r, center)
    return BasicLocalSentence(r, 1, psi, center)


def min_degree_psi(d: int, r: int = 1, x: str = "x") -> Formula:
    """r-local ``x has at least d distinct E-neighbours``."""
    ys = [f"y{i}" for i in range(1, d + 1)]
    parts = [Rel("E", (x, y)) for y in ys]
    parts += [Not(Eq(a, b)) for i, a in enumerate(ys) for b in ys[i + 1:]]
    body: Formula = conj(*parts)
    for y in reversed(ys):
        body = Exists(y, body)
    return relativize(body, r, x)


def has_neighbor_psi(r: int = 1, x: str = "x") -> Formula:
    return relativize(Exists("y", Rel("E", (x, "y"))), r, x)


def trivial_psi(r: int = 1, x: str = "x") -> Formula:
    return Eq(x, x)


def bench_sentence() -> BasicLocalSentence:
    """Two elements of degree >= 3 at distance > 2 (r = 1, m = 2)."""
    return BasicLocalSentence(1, 2, min_degree_psi(3, 1))

