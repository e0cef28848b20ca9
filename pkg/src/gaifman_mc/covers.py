"""Neighborhood covers, BFS-layer tree covers and their kernels.

A cover is a family of element sets ("pieces") such that every r-ball lies
inside some piece. The kernel of a piece T is ``{a in T | N_r(a) ⊆ T}``.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Sequence

from . import backend as _kernels
from .structures import GaifmanGraph


@dataclass(frozen=True)
class NeighborhoodCover:
    r: int
    s: int


@dataclass(frozen=True)
class TreeCover:
    r: int
    width_bound: int | None = None


@dataclass(frozen=True)
class CoverStats:
    piece_count: int
    total_size: int
    max_piece: int


@dataclass(frozen=True)
class Cover:
    pieces: tuple[tuple[int, ...], ...]
    kind: NeighborhoodCover | TreeCover
    kernels: tuple[tuple[int, ...], ...] | None = None
    # seed (Peleg) or BFS root (layers) of every piece
    seeds: tuple[int, ...] | None = None
    # Peleg only: the set M of the last growth round, and the round count
    final_ms: tuple[tuple[int, ...], ...] | None = None
    iterations: tuple[int, ...] | None = None

    def __post_init__(self):
        for i, p in enumerate(self.pieces):
            if not p:
                raise ValueError(f"piece {i} is empty")
        if self.kernels is not None and len(self.kernels) != len(self.pieces):
            raise ValueError("kernels must parallel pieces")

    @property
    def r(self) -> int:
        return self.kind.r

    @property
    def stats(self) -> CoverStats:
        sizes = [len(p) for p in self.pieces]
        return CoverStats(len(sizes), sum(sizes), max(sizes, default=0))

    def permuted(self, order: Sequence[int]) -> "Cover":
        """Same cover with pieces (and parallel metadata) reordered."""

        def pick(xs):
            return None if xs is None else tuple(xs[i] for i in order)

        return Cover(
            pick(self.pieces), self.kind, pick(self.kernels), pick(self.seeds),
            pick(self.final_ms), pick(self.iterations),
        )


def peleg_cover(g: GaifmanGraph, r: int, k: int) -> Cover:
    """(r, 2kr)-neighborhood cover of total size at most n^(1+1/k).

    Repeatedly take the smallest uncovered element a, and grow
    ``M := N; L := N_r(M) ∩ H; N := N_r(L)`` from ``N = {a}`` while
    ``|N| > n^(1/k) |M|``; emit N and mark L covered. The growth test is done
    as ``|N|^k > n |M|^k`` in exact integers.
    """
    if r < 1:
        raise ValueError("peleg_cover needs r >= 1")
    if k < 1:
        raise ValueError("peleg_cover needs k >= 1")
    pieces, seeds, final_ms, iterations = _kernels.peleg(g, r, k)
    return Cover(
        tuple(map(tuple, pieces)),
        NeighborhoodCover(r, 2 * k * r),
        seeds=tuple(seeds),
        final_ms=tuple(map(tuple, final_ms)),
        iterations=tuple(iterations),
    )


def bfs_layer_cover(g: GaifmanGraph, r: int, width_bound: int | None = None) -> Cover:
    """Slices ``{a | i <= d(a0, a) <= i + 2r}`` of BFS layers, per component.

    ``a0`` is the smallest element of each connected component; empty slices
    are skipped, so every element lies in at most 2r+1 pieces.
    """
    if r < 0:
        raise ValueError("radius must be >= 0")
    dist, root = _kernels.bfs_forest(g)
    layers: dict[int, list[list[int]]] = {}
    for a in range(g.n):
        comp = layers.setdefault(root[a], [])
        d = dist[a]
        while len(comp) <= d:
            comp.append([])
        comp[d].append(a)
    pieces, seeds = [], []
    for a0 in sorted(layers):
        comp = layers[a0]
        for i in range(len(comp)):
            piece = sorted(a for layer in comp[i:i + 2 * r + 1] for a in layer)
            pieces.append(tuple(piece))
            seeds.append(a0)
    return Cover(tuple(pieces), TreeCover(r, width_bound), seeds=tuple(seeds))


def kernels(g: GaifmanGraph, cover: Cover, r: int | None = None) -> Cover:
    """Cover with ``kernels[i] = {a in pieces[i] | N_r(a) ⊆ pieces[i]}`` filled in.

    Computed in r shrinking rounds with one epoch-stamped array shared by all
    pieces, so the cost is linear in the pieces and their edges.
    """
    if r is None:
        r = cover.r
    if r != cover.r:
        raise ValueError(f"kernel radius {r} does not match the cover radius {cover.r}")
    ks = _kernels.kernel_sets(g, cover.pieces, r)
    return dataclasses.replace(cover, kernels=tuple(map(tuple, ks)))


@dataclass
class CoverReport:
    ok: bool
    property1: bool
    property2: bool | None
    uncovered: list[int] = field(default_factory=list)
    bad_pieces: list[int] = field(default_factory=list)
    widths: list[int] | None = None


def induced_subgraph(g: GaifmanGraph, members: Sequence[int]) -> tuple[GaifmanGraph, tuple[int, ...]]:
    to_old = tuple(sorted(set(members)))
    to_new = {a: i for i, a in enumerate(to_old)}
    adj = [[to_new[b] for b in g.adj[a] if b in to_new] for a in to_old]
    return GaifmanGraph(len(to_old), adj), to_old


def validate_cover(g: GaifmanGraph, cover: Cover, widths: bool | None = None) -> CoverReport:
    """Check the cover properties directly from BFS balls.

    Property 1: every r-ball lies inside a piece. Property 2 (neighborhood
    covers): every piece lies inside some s-ball. Tree covers get heuristic
    widths of the induced pieces instead (upper bounds, never a failure).
    """
    from .treewidth import heuristic_width

    r = cover.r
    piece_sets = [frozenset(p) for p in cover.pieces]
    containing: list[list[int]] = [[] for _ in range(g.n)]
    for i, p in enumerate(cover.pieces):
        for a in p:
            if not 0 <= a < g.n:
                raise ValueError(f"piece {i} holds unknown element {a}")
            containing[a].append(i)

    uncovered = []
    for a in range(g.n):
        ball = _kernels.ball(g, [a], r)
        if not any(piece_sets[i].issuperset(ball) for i in containing[a]):
            uncovered.append(a)

    bad = []
    prop2 = None
    if isinstance(cover.kind, NeighborhoodCover):
        s = cover.kind.s
        for i, p in enumerate(piece_sets):
            if not _inside_some_ball(g, p, s, cover.seeds[i] if cover.seeds else None):
                bad.append(i)
        prop2 = not bad

    if widths is None:
        widths = isinstance(cover.kind, TreeCover)
    w = [heuristic_width(induced_subgraph(g, p)[0]) for p in cover.pieces] if widths else None
    return CoverReport(not uncovered and not bad, not uncovered, prop2, uncovered, bad, w)


def _inside_some_ball(g: GaifmanGraph, piece: frozenset, s: int, hint: int | None) -> bool:
    if hint is not None and piece.issubset(_kernels.ball(g, [hint], s)):
        return True
    # any center is within s of every member, in particular of the first one
    first = min(piece)
    for c in _kernels.ball(g, [first], s):
        if piece.issubset(_kernels.ball(g, [c], s)):
            return True
    return False
