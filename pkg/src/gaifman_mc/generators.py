"""Deterministic structure generators: grids, cycles, bounded-degree graphs, set cover."""
from __future__ import annotations

import random

from .structures import Structure, Vocabulary

GRAPH = Vocabulary((("E", 2),))
HYPERGRAPH = Vocabulary((("E", 2), ("P", 1)))


def _graph(n: int, edges) -> Structure:
    tuples = set()
    for a, b in edges:
        tuples.add((a, b))
        tuples.add((b, a))
    return Structure(GRAPH, n, {"E": tuples})


def grid(width: int, height: int) -> Structure:
    """Planar grid; element ``row * width + col``."""
    if width < 1 or height < 1:
        raise ValueError("grid needs width, height >= 1")
    edges = []
    for i in range(height):
        for j in range(width):
            v = i * width + j
            if j + 1 < width:
                edges.append((v, v + 1))
            if i + 1 < height:
                edges.append((v, v + width))
    return _graph(width * height, edges)


def cycle(n: int) -> Structure:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return _graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Structure:
    if n < 1:
        raise ValueError("path needs n >= 1")
    return _graph(n, [(i, i + 1) for i in range(n - 1)])


def rand_deg(n: int, deg: int, seed: int = 0, tries: int = 8) -> Structure:
    """Random graph of valence at most ``deg``.

    ``deg`` sweeps; each sweep walks a random permutation and tries to match
    every vertex that still has spare degree with a random partner, retrying
    up to ``tries`` times when the partner is saturated or already adjacent.
    """
    if n < 1 or not 1 <= deg < max(n, 2):
        raise ValueError("rand_deg needs n >= 1 and 1 <= deg < n")
    rng = random.Random(seed)
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for _ in range(deg):
        order = list(range(n))
        rng.shuffle(order)
        for a in order:
            if len(nbrs[a]) >= deg:
                continue
            for _ in range(tries):
                b = rng.randrange(n)
                if b != a and len(nbrs[b]) < deg and b not in nbrs[a]:
                    nbrs[a].add(b)
                    nbrs[b].add(a)
                    break
    edges = [(a, b) for a in range(n) for b in sorted(nbrs[a]) if a < b]
    return _graph(n, edges)


def set_cover(ground: int, sets: int, freq: int, cover: int = 2, seed: int = 0) -> Structure:
    """Incidence structure of a set family with optimum cover size exactly ``cover``.

    Ground elements are ``0..ground-1`` (marked by P); set ``j`` is element
    ``ground + j`` with ``E(v, set)`` for each member v. The ground set is
    split into ``cover`` blocks that are planted as sets. Every other set has
    at most as many members as the smallest block, so ``cover - 1`` sets can
    never reach all ground elements. Blocks are chained by two-element sets
    so the incidence graph is connected. No element lies in more than
    ``freq`` sets.
    """
    if cover < 1 or ground < cover:
        raise ValueError("set_cover needs 1 <= cover <= ground")
    if sets < cover:
        raise ValueError("set_cover needs sets >= cover")
    if freq < 1 or (cover > 1 and freq < 2 and sets > cover):
        raise ValueError("set_cover needs freq >= 1 (>= 2 for decoy sets)")
    rng = random.Random(seed)
    elems = list(range(ground))
    rng.shuffle(elems)
    blocks = [sorted(elems[i::cover]) for i in range(cover)]
    smallest = min(len(b) for b in blocks)
    load = [1] * ground
    family = [list(b) for b in blocks]

    def take(members):
        for v in members:
            load[v] += 1
        family.append(sorted(members))

    for i in range(cover - 1):
        if len(family) >= sets:
            break
        a, b = blocks[i][-1], blocks[i + 1][0]
        if smallest < 2 or load[a] >= freq or load[b] >= freq:
            raise ValueError("parameters leave no room to connect the blocks")
        take([a, b])
    while len(family) < sets:
        spare = [v for v in range(ground) if load[v] < freq]
        if not spare:
            raise ValueError("freq is too small for the requested number of sets")
        size = rng.randint(1, min(smallest, len(spare)))
        take(rng.sample(spare, size))
    rng.shuffle(family)
    edges = [(v, ground + j) for j, members in enumerate(family) for v in members]
    return Structure(HYPERGRAPH, ground + len(family), {"E": edges, "P": [(v,) for v in range(ground)]})


FAMILIES = ("grid", "rand-deg", "cycle", "setcover")


def parse_params(text: str | None) -> dict[str, int]:
    out: dict[str, int] = {}
    if not text:
        return out
    for item in text.split(","):
        if not item.strip():
            continue
        key, sep, val = item.partition("=")
        if not sep:
            raise ValueError(f"parameter {item!r} is not of the form key=value")
        try:
            out[key.strip()] = int(val)
        except ValueError:
            raise ValueError(f"parameter {key.strip()!r} needs an integer value") from None
    return out


def generate(family: str, params: dict[str, int], seed: int = 0) -> Structure:
    p = dict(params)

    def need(*keys):
        missing = [k for k in keys if k not in p]
        if missing:
            raise ValueError(f"{family} needs parameters {', '.join(missing)}")

    if family == "grid":
        need("width", "height")
        return grid(p["width"], p["height"])
    if family == "cycle":
        need("n")
        return cycle(p["n"])
    if family == "rand-deg":
        need("n", "deg")
        return rand_deg(p["n"], p["deg"], seed)
    if family == "setcover":
        need("ground", "sets", "freq")
        return set_cover(p["ground"], p["sets"], p["freq"], p.get("cover", 2), seed)
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


def sized(family: str, size: int, seed: int = 0) -> Structure:
    """One instance of ``family`` scaled by a single size parameter (for benchmarks).

    grid: side length; cycle and rand-deg: element count (degree 3);
    setcover: ground-set size with ``size // 2`` sets, frequency 3, optimum 2.
    """
    if family == "grid":
        return grid(size, size)
    if family == "cycle":
        return cycle(size)
    if family == "rand-deg":
        return rand_deg(size, 3, seed)
    if family == "setcover":
        return set_cover(size, max(2, size // 2), 3, 2, seed)
    raise ValueError(f"unknown family {family!r}")
