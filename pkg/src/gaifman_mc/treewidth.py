"""Tree decompositions: validation, a min-degree heuristic and an exact oracle."""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Sequence

from .structures import GaifmanGraph, Structure


@dataclass(frozen=True)
class TreeDecomposition:
    tree: tuple[tuple[int, ...], ...]
    bags: tuple[frozenset, ...]

    @classmethod
    def build(cls, edges: Sequence[tuple[int, int]], bags: Sequence) -> "TreeDecomposition":
        adj: list[list[int]] = [[] for _ in bags]
        for s, t in edges:
            adj[s].append(t)
            adj[t].append(s)
        return cls(tuple(tuple(sorted(a)) for a in adj), tuple(frozenset(b) for b in bags))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1


@dataclass(frozen=True)
class DecompositionCheck:
    ok: bool
    violated: str | None = None  # "tree", "coverage" or "tuples"
    detail: str = ""

    def __bool__(self):
        return self.ok


def _connected(nodes: set[int], tree) -> bool:
    start = next(iter(nodes))
    seen = {start}
    stack = [start]
    while stack:
        t = stack.pop()
        for u in tree[t]:
            if u in nodes and u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(nodes)


def validate_decomposition(s: Structure, td: TreeDecomposition) -> DecompositionCheck:
    """Check ``td`` against the definition and report the first violation."""
    m = len(td.bags)
    if m == 0:
        return DecompositionCheck(False, "tree", "no nodes")
    if len(td.tree) != m:
        return DecompositionCheck(False, "tree", "tree and bag lists differ in length")
    n_edges = 0
    for t, nbrs in enumerate(td.tree):
        for u in nbrs:
            if not 0 <= u < m or u == t or t not in td.tree[u]:
                return DecompositionCheck(False, "tree", f"bad edge {t}-{u}")
        n_edges += len(nbrs)
    if n_edges // 2 != m - 1 or not _connected(set(range(m)), td.tree):
        return DecompositionCheck(False, "tree", "not a tree")

    occ: list[set[int]] = [set() for _ in range(s.n)]
    for t, bag in enumerate(td.bags):
        for a in bag:
            if not 0 <= a < s.n:
                return DecompositionCheck(False, "coverage", f"bag {t} holds unknown element {a}")
            occ[a].add(t)
    for a, nodes in enumerate(occ):
        if not nodes:
            return DecompositionCheck(False, "coverage", f"element {a} in no bag")
        if not _connected(nodes, td.tree):
            return DecompositionCheck(False, "coverage", f"bags of element {a} are disconnected")

    for name, tuples in s.relations.items():
        for tup in tuples:
            common = set.intersection(*(occ[a] for a in set(tup)))
            if not common:
                return DecompositionCheck(False, "tuples", f"{name}{tup} in no single bag")
    return DecompositionCheck(True)


def _fill(nbrs: list[set[int]], v: int) -> int:
    nv = sorted(nbrs[v])
    missing = 0
    for i, a in enumerate(nv):
        na = nbrs[a]
        for b in nv[i + 1:]:
            if b not in na:
                missing += 1
    return missing


def elimination_order(g: GaifmanGraph) -> list[int]:
    """Min-degree order, ties broken by min fill and then by smallest id."""
    return _eliminate(g)[0]


def _eliminate(g: GaifmanGraph):
    nbrs = [set(nb) for nb in g.adj]
    alive = [True] * g.n
    key = [(len(nbrs[v]), _fill(nbrs, v)) for v in range(g.n)]
    heap = [(d, f, v) for v, (d, f) in enumerate(key)]
    heapq.heapify(heap)
    order, bags = [], []
    while heap:
        d, f, v = heapq.heappop(heap)
        if not alive[v] or key[v] != (d, f):
            continue
        alive[v] = False
        nv = nbrs[v]
        order.append(v)
        bags.append(frozenset(nv | {v}))
        for a in nv:
            nbrs[a].discard(v)
            nbrs[a].update(nv)
            nbrs[a].discard(a)
        touched = set(nv)
        for a in nv:
            touched.update(nbrs[a])
        for a in touched:
            new = (len(nbrs[a]), _fill(nbrs, a))
            if new != key[a]:
                key[a] = new
                heapq.heappush(heap, (new[0], new[1], a))
        nbrs[v] = set()
    return order, bags


def decomposition_from_order(g: GaifmanGraph, order: Sequence[int]) -> TreeDecomposition:
    """Tree decomposition induced by eliminating vertices in ``order``."""
    pos = {v: i for i, v in enumerate(order)}
    if len(pos) != g.n:
        raise ValueError("order must be a permutation of the universe")
    nbrs = [set(nb) for nb in g.adj]
    bags = []
    for v in order:
        nv = {a for a in nbrs[v] if pos[a] > pos[v]}
        bags.append(frozenset(nv | {v}))
        for a in nv:
            nbrs[a].update(nv)
            nbrs[a].discard(a)
    return _tree_from_bags(order, bags, pos)


def _tree_from_bags(order, bags, pos) -> TreeDecomposition:
    edges = []
    roots = []
    for i, v in enumerate(order):
        later = [pos[a] for a in bags[i] if a != v]
        if later:
            edges.append((i, min(later)))
        else:
            roots.append(i)
    # separate components share no element, so chaining their roots is safe
    edges.extend(zip(roots, roots[1:]))
    return TreeDecomposition.build(edges, bags)


def heuristic_decomposition(s: Structure | GaifmanGraph) -> TreeDecomposition:
    """Valid decomposition from a min-degree / min-fill elimination order.

    Its width is an upper bound on the tree-width.
    """
    g = s if isinstance(s, GaifmanGraph) else s.gaifman
    order, bags = _eliminate(g)
    pos = {v: i for i, v in enumerate(order)}
    return _tree_from_bags(order, bags, pos)


def heuristic_width(s: Structure | GaifmanGraph) -> int:
    return heuristic_decomposition(s).width


class InstanceTooLarge(ValueError):
    pass


def exact_width(s: Structure | GaifmanGraph, cap: int = 12) -> int:
    """Exact tree-width by dynamic programming over elimination prefixes.

    ``TW(S ∪ {v}) = min max(TW(S), |Q(S, v)|)`` where ``Q(S, v)`` is the set
    of uneliminated vertices reachable from ``v`` through ``S``. States whose
    value already reaches the heuristic bound are dropped.
    """
    g = s if isinstance(s, GaifmanGraph) else s.gaifman
    n = g.n
    if n > cap:
        raise InstanceTooLarge(f"{n} elements exceeds the exact-width cap of {cap}")
    if g.edge_count == 0:
        return 0
    adjm = [sum(1 << b for b in nb) for nb in g.adj]
    full = (1 << n) - 1

    def q(S: int, v: int) -> int:
        seen = 1 << v
        out = 0
        stack = [v]
        while stack:
            u = stack.pop()
            new = adjm[u] & ~seen
            seen |= new
            out |= new & ~S
            inner = new & S
            while inner:
                low = inner & -inner
                stack.append(low.bit_length() - 1)
                inner ^= low
        return bin(out).count("1")

    ub = heuristic_width(g)
    level = {0: -1}
    for _ in range(n):
        nxt: dict[int, int] = {}
        for S, val in level.items():
            rest = full & ~S
            while rest:
                low = rest & -rest
                v = low.bit_length() - 1
                rest ^= low
                cand = max(val, q(S, v))
                if cand < ub:
                    T = S | low
                    if cand < nxt.get(T, ub):
                        nxt[T] = cand
        level = nxt
        if not level:
            return ub
    return min(ub, level.get(full, ub))
