"""Finite relational structures and their Gaifman graphs.

Elements are always the integers ``0..n-1``; files that use other labels are
normalized by :func:`normalize_labels` before a :class:`Structure` is built.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import backend


class StructureError(ValueError):
    """Malformed vocabulary, structure or structure file."""


@dataclass(frozen=True)
class Vocabulary:
    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        symbols = tuple((str(name), int(arity)) for name, arity in self.symbols)
        seen = set()
        for i, (name, arity) in enumerate(symbols):
            if not name.isidentifier():
                raise StructureError(f"vocabulary[{i}]: invalid symbol name {name!r}")
            if name in seen:
                raise StructureError(f"vocabulary[{i}]: duplicate symbol {name!r}")
            if arity < 1:
                raise StructureError(f"vocabulary[{i}]: arity of {name!r} must be >= 1")
            seen.add(name)
        object.__setattr__(self, "symbols", symbols)

    @classmethod
    def of(cls, **arities: int) -> "Vocabulary":
        return cls(tuple(arities.items()))

    @cached_property
    def _arity(self) -> dict[str, int]:
        return dict(self.symbols)

    def arity(self, name: str) -> int:
        try:
            return self._arity[name]
        except KeyError:
            raise StructureError(f"unknown relation symbol {name!r}") from None

    def __contains__(self, name) -> bool:
        return name in self._arity

    @property
    def names(self) -> list[str]:
        return [name for name, _ in self.symbols]

    def max_arity(self) -> int:
        return max((a for _, a in self.symbols), default=0)


@dataclass(frozen=True)
class SizeReport:
    universe: int
    total_size: int


@dataclass(frozen=True, eq=False)
class Structure:
    """A finite relational structure over universe ``range(n)``.

    ``relations`` maps each vocabulary symbol to a frozenset of tuples; missing
    symbols are filled in as empty relations.
    """

    vocabulary: Vocabulary
    n: int
    relations: Mapping[str, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        n = int(self.n)
        if n < 1:
            raise StructureError("universe must be non-empty (n >= 1)")
        object.__setattr__(self, "n", n)
        rels = {}
        for name in self.relations:
            if name not in self.vocabulary:
                raise StructureError(f"relations.{name}: symbol not in vocabulary")
        for name, arity in self.vocabulary.symbols:
            tuples = set()
            for i, t in enumerate(self.relations.get(name, ())):
                t = tuple(int(v) for v in t)
                if len(t) != arity:
                    raise StructureError(
                        f"relations.{name}[{i}]: tuple has {len(t)} entries, arity is {arity}"
                    )
                for j, v in enumerate(t):
                    if not 0 <= v < n:
                        raise StructureError(
                            f"relations.{name}[{i}][{j}]: element {v} out of range [0, {n})"
                        )
                tuples.add(t)
            rels[name] = frozenset(tuples)
        object.__setattr__(self, "relations", rels)

    def __eq__(self, other):
        if not isinstance(other, Structure):
            return NotImplemented
        return (
            self.vocabulary == other.vocabulary
            and self.n == other.n
            and self.relations == other.relations
        )

    def __hash__(self):
        return hash((self.vocabulary, self.n))

    def __repr__(self):
        counts = ", ".join(f"{k}:{len(v)}" for k, v in self.relations.items())
        return f"Structure(n={self.n}, {counts})"

    @classmethod
    def from_graph(cls, g: "GaifmanGraph", symbol: str = "E") -> "Structure":
        """Graph as an ``{E}``-structure, each edge stored in both directions."""
        edges = [(a, b) for a in range(g.n) for b in g.adj[a]]
        return cls(Vocabulary(((symbol, 2),)), g.n, {symbol: edges})

    def size(self) -> SizeReport:
        total = self.n + sum(
            self.vocabulary.arity(name) * len(ts) for name, ts in self.relations.items()
        )
        return SizeReport(self.n, total)

    @cached_property
    def gaifman(self) -> "GaifmanGraph":
        return GaifmanGraph.from_structure(self)

    @cached_property
    def incidence(self) -> list[list[tuple[str, tuple]]]:
        """Per element, the (symbol, tuple) pairs it occurs in (each pair once)."""
        inc: list[list[tuple[str, tuple]]] = [[] for _ in range(self.n)]
        for name, tuples in self.relations.items():
            for t in tuples:
                for v in set(t):
                    inc[v].append((name, t))
        return inc


class GaifmanGraph:
    """Undirected, loop-free graph stored as sorted adjacency lists plus CSR arrays."""

    __slots__ = ("n", "adj", "edge_count", "indptr", "indices", "_mark", "_epoch", "__weakref__")

    def __init__(self, n: int, adj: Sequence[Sequence[int]]):
        self.n = n
        self.adj = tuple(tuple(nb) for nb in adj)
        self.edge_count = sum(len(nb) for nb in self.adj) // 2
        self.indptr = np.zeros(n + 1, dtype=np.int32)
        self.indptr[1:] = np.cumsum([len(nb) for nb in self.adj], dtype=np.int64)
        self.indices = np.fromiter(
            (b for nb in self.adj for b in nb), dtype=np.int32, count=int(self.indptr[-1])
        )
        # scratch for the compiled BFS kernels, reused across calls via epochs
        self._mark = None
        self._epoch = 0

    @classmethod
    def from_structure(cls, s: Structure) -> "GaifmanGraph":
        nbrs: list[set[int]] = [set() for _ in range(s.n)]
        for tuples in s.relations.values():
            for t in tuples:
                elems = set(t)
                if len(elems) < 2:
                    continue
                for a in elems:
                    nbrs[a].update(elems)
        for a, nb in enumerate(nbrs):
            nb.discard(a)
        return cls(s.n, [sorted(nb) for nb in nbrs])

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "GaifmanGraph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for a, b in edges:
            if a != b:
                nbrs[a].add(b)
                nbrs[b].add(a)
        return cls(n, [sorted(nb) for nb in nbrs])

    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.n) for b in self.adj[a] if a < b]

    def degree(self, a: int) -> int:
        return len(self.adj[a])

    def valence(self) -> int:
        return max((len(nb) for nb in self.adj), default=0)

    def __repr__(self):
        return f"GaifmanGraph(n={self.n}, edges={self.edge_count})"


def gaifman_graph(s: Structure) -> GaifmanGraph:
    return s.gaifman


def _check_element(g: GaifmanGraph, a: int) -> None:
    if not 0 <= a < g.n:
        raise IndexError(f"element {a} out of range [0, {g.n})")


def neighborhood(g: GaifmanGraph, a: int, r: int) -> set[int]:
    """``{b | d(a, b) <= r}`` by truncated BFS."""
    _check_element(g, a)
    return set(backend.ball(g, [a], r))


def neighborhood_of_set(g: GaifmanGraph, elements: Iterable[int], r: int) -> set[int]:
    sources = list(elements)
    for a in sources:
        _check_element(g, a)
    if not sources:
        return set()
    return set(backend.ball(g, sources, r))


def distances(g: GaifmanGraph, a: int, r: int | None = None) -> dict[int, int]:
    """BFS distances from ``a``, truncated at ``r`` when given."""
    _check_element(g, a)
    return backend.distances(g, a, g.n if r is None else r)


def induced_substructure(s: Structure, elements: Iterable[int]) -> tuple[Structure, tuple[int, ...]]:
    """Substructure induced on ``elements``.

    Returns ``(sub, to_old)`` where element ``i`` of ``sub`` is ``to_old[i]``
    in ``s``; ``to_old`` is sorted. Runs in time proportional to the number of
    tuples incident to ``elements``.
    """
    to_old = tuple(sorted(set(elements)))
    if not to_old:
        raise StructureError("induced substructure on an empty set")
    if to_old[0] < 0 or to_old[-1] >= s.n:
        raise StructureError("induced substructure: element out of range")
    to_new = {a: i for i, a in enumerate(to_old)}
    rels: dict[str, set] = {name: set() for name in s.relations}
    inc = s.incidence
    for a in to_old:
        for name, t in inc[a]:
            if all(v in to_new for v in t):
                rels[name].add(tuple(to_new[v] for v in t))
    return Structure(s.vocabulary, len(to_old), rels), to_old


def local_tree_width_profile(s: Structure, r_max: int, exact_cap: int = 12) -> list[int]:
    """Upper bounds on ``max_a tw(<N_r(a)>)`` for ``r = 0..r_max``.

    Neighborhoods with at most ``exact_cap`` elements use the exact width
    oracle; larger ones use the min-degree heuristic, so every entry is an
    upper bound (and exact when all neighborhoods are small).
    """
    from .treewidth import exact_width, heuristic_decomposition

    if r_max < 0:
        raise ValueError("r_max must be >= 0")
    g = s.gaifman
    profile = []
    for r in range(r_max + 1):
        best = 0
        for a in range(s.n):
            sub, _ = induced_substructure(s, neighborhood(g, a, r))
            if sub.n <= exact_cap:
                w = exact_width(sub, cap=exact_cap)
            else:
                w = heuristic_decomposition(sub).width
            best = max(best, w)
        profile.append(best)
    return profile


def normalize_labels(
    vocabulary: Vocabulary, elements: Sequence, relations: Mapping[str, Iterable[Sequence]]
) -> tuple[Structure, list]:
    """Build a structure from arbitrary hashable labels.

    Labels are numbered in the order given by ``elements``; the label list is
    returned so results can be mapped back.
    """
    index = {}
    for lab in elements:
        index.setdefault(lab, len(index))
    rels = {}
    for name, tuples in relations.items():
        out = []
        for i, t in enumerate(tuples):
            try:
                out.append(tuple(index[v] for v in t))
            except KeyError as e:
                raise StructureError(f"relations.{name}[{i}]: unknown element {e.args[0]!r}") from None
        rels[name] = out
    return Structure(vocabulary, len(index), rels), list(index)


# -- file format -----------------------------------------------------------

def structure_to_dict(s: Structure) -> dict:
    return {
        "vocabulary": [{"name": n, "arity": a} for n, a in s.vocabulary.symbols],
        "universe": s.n,
        "relations": {name: sorted(list(t) for t in ts) for name, ts in s.relations.items()},
    }


def dump_structure(s: Structure) -> str:
    d = structure_to_dict(s)
    # one tuple per line keeps files diffable and byte-stable
    rel_lines = []
    for name, tuples in d["relations"].items():
        body = ",\n    ".join(json.dumps(t) for t in tuples)
        rel_lines.append(f'  {json.dumps(name)}: [' + (f"\n    {body}\n  ]" if tuples else "]"))
    vocab = json.dumps(d["vocabulary"])
    return (
        "{\n"
        f' "vocabulary": {vocab},\n'
        f' "universe": {d["universe"]},\n'
        ' "relations": {\n' + ",\n".join(rel_lines) + "\n }\n}\n"
    )


def structure_from_dict(d) -> Structure:
    if not isinstance(d, dict):
        raise StructureError("document: expected an object")
    for key in ("vocabulary", "universe", "relations"):
        if key not in d:
            raise StructureError(f"document: missing field {key!r}")
    vocab_raw = d["vocabulary"]
    if not isinstance(vocab_raw, list):
        raise StructureError("vocabulary: expected a list")
    symbols = []
    for i, entry in enumerate(vocab_raw):
        if not isinstance(entry, dict) or "name" not in entry or "arity" not in entry:
            raise StructureError(f"vocabulary[{i}]: expected {{name, arity}}")
        if not isinstance(entry["arity"], int) or isinstance(entry["arity"], bool):
            raise StructureError(f"vocabulary[{i}].arity: expected an integer")
        symbols.append((entry["name"], entry["arity"]))
    vocab = Vocabulary(tuple(symbols))
    n = d["universe"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise StructureError("universe: expected an integer")
    rels = d["relations"]
    if not isinstance(rels, dict):
        raise StructureError("relations: expected an object")
    for name, tuples in rels.items():
        if not isinstance(tuples, list):
            raise StructureError(f"relations.{name}: expected a list of tuples")
        for i, t in enumerate(tuples):
            if not isinstance(t, list) or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in t
            ):
                raise StructureError(f"relations.{name}[{i}]: expected a list of integers")
    return Structure(vocab, n, rels)


def parse_structure(text: str) -> Structure:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise StructureError(f"line {e.lineno} column {e.colno}: {e.msg}") from None
    return structure_from_dict(d)


def load_structure(path) -> Structure:
    with open(path, encoding="utf-8") as f:
        return parse_structure(f.read())


def save_structure(s: Structure, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dump_structure(s))
