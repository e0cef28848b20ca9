"""Model checking of Gaifman-normal-form sentences via covers.

For each basic local sentence (r, m, psi): cover the structure by pieces,
keep in every piece the elements whose r-ball it contains (its kernel),
evaluate psi at those elements inside the piece, and decide whether the
satisfying set P holds m elements pairwise more than 2r apart.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable

from . import backend as _kernels
from .covers import Cover, bfs_layer_cover, kernels, peleg_cover
from .logic.evaluate import LocalContext, check_vocabulary, compile_local
from .logic.gnf import BasicLocalSentence, GaifmanSentence, fold
from .logic.syntax import Formula, to_text
from .logic.transform import LocalityError, check_r_local
from .structures import Structure, induced_substructure


@dataclass(frozen=True)
class Peleg:
    k: int = 2

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("Peleg exponent k must be >= 1")

    name = "peleg"


@dataclass(frozen=True)
class BfsLayers:
    name = "bfs-layers"


@dataclass(frozen=True)
class EngineConfig:
    strategy: Peleg | BfsLayers = field(default_factory=BfsLayers)
    record_witnesses: bool = True
    parallel_pieces: bool = False
    max_workers: int | None = None


@dataclass
class PhaseTimes:
    gaifman_ns: int = 0
    cover_ns: int = 0
    kernels_ns: int = 0
    local_ns: int = 0
    scattered_ns: int = 0

    @property
    def total_ns(self) -> int:
        return self.gaifman_ns + self.cover_ns + self.kernels_ns + self.local_ns + self.scattered_ns

    def add(self, other: "PhaseTimes") -> None:
        for k in ("gaifman_ns", "cover_ns", "kernels_ns", "local_ns", "scattered_ns"):
            setattr(self, k, getattr(self, k) + getattr(other, k))


@dataclass
class LeafRecord:
    r: int
    m: int
    psi: str
    verdict: bool
    satisfiers: int
    pieces: int
    pieces_used: int
    cover_total: int
    max_piece: int
    witnesses: list[int] | None
    phase: int
    times: PhaseTimes


@dataclass
class EvalReport:
    verdict: bool
    strategy: str
    leaves: list[LeafRecord]
    times: PhaseTimes

    def to_dict(self) -> dict:
        d = asdict(self)
        d["times"]["total_ns"] = self.times.total_ns
        return d


@dataclass(frozen=True)
class ScatteredResult:
    found: bool
    witnesses: tuple[int, ...] | None
    # 0: P empty, 1: greedy phase decided, 2: search inside N_2r of the greedy picks
    phase: int
    distance_checks: int = 0

    def __bool__(self):
        return self.found


def _assign(cover: Cover, n: int) -> list[list[int]]:
    """Per piece, the kernel elements it is responsible for (first piece wins)."""
    owner = [False] * n
    assigned = []
    for kern in cover.kernels:
        mine = []
        for a in kern:
            if not owner[a]:
                owner[a] = True
                mine.append(a)
        assigned.append(mine)
    if not all(owner):
        missing = owner.index(False)
        raise ValueError(f"element {missing} lies in no kernel; the cover is invalid")
    return assigned


def _eval_piece(s: Structure, piece, elements, psi: Formula, x: str) -> list[int]:
    sub, to_old = induced_substructure(s, piece)
    to_new = {a: i for i, a in enumerate(to_old)}
    ctx = LocalContext(sub)
    fn = compile_local(psi)
    return [a for a in elements if fn(ctx, {x: to_new[a]})]


def _satisfiers(s, cover, psi, r, x, parallel=False, max_workers=None):
    if not check_r_local(psi, r, x):
        raise LocalityError(f"psi is not {r}-local in {x!r}")
    if cover.kernels is None:
        raise ValueError("cover has no kernels; run covers.kernels first")
    if cover.r != r:
        raise ValueError(f"cover radius {cover.r} does not match r = {r}")
    check_vocabulary(psi, s)
    assigned = _assign(cover, s.n)
    jobs = [(cover.pieces[i], els) for i, els in enumerate(assigned) if els]
    if parallel and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            parts = list(pool.map(lambda j: _eval_piece(s, j[0], j[1], psi, x), jobs))
    else:
        parts = [_eval_piece(s, piece, els, psi, x) for piece, els in jobs]
    return {a for part in parts for a in part}, len(jobs)


def local_satisfier_set(
    s: Structure, cover: Cover, psi: Formula, r: int, x: str = "x", parallel: bool = False
) -> set[int]:
    """``{a | s |= psi(a)}`` for an r-local ``psi``, evaluating each a in one piece."""
    return _satisfiers(s, cover, psi, r, x, parallel)[0]


def scattered_exists(
    s: Structure, P: Iterable[int], r: int, m: int, check_distances: bool = False
) -> ScatteredResult:
    """Are there m elements of P with pairwise distance > r?

    Phase 1 greedily picks the smallest element of Q, removing its r-ball from
    Q, until m picks or Q is empty. Otherwise every element of P is within r
    of a pick, so distances up to r between elements of P can be measured in
    the substructure induced on the 2r-ball H of the picks; phase 2 searches
    there by backtracking in id order with a count-based cutoff.

    With ``check_distances`` every pair of P is also checked for
    ``min(d_H, r+1) == min(d_A, r+1)`` (AssertionError otherwise).
    """
    g = s.gaifman
    cand = sorted(set(P))
    if m < 1:
        raise ValueError("m must be >= 1")
    queue = set(cand)
    picks: list[int] = []
    for a in cand:
        if len(picks) == m:
            break
        if a in queue:
            picks.append(a)
            queue.difference_update(_kernels.ball(g, [a], r))
    if len(picks) == m:
        return ScatteredResult(True, tuple(picks), 1)
    if not picks:
        return ScatteredResult(False, None, 0)

    H = _kernels.ball(g, picks, 2 * r)
    sub, to_old = induced_substructure(s, H)
    to_new = {a: i for i, a in enumerate(to_old)}
    if any(b not in to_new for b in cand):
        raise AssertionError("phase 1 left an element of P outside N_r of the picks")
    cs = [to_new[b] for b in cand]
    hg = sub.gaifman
    near = {c: frozenset(_kernels.ball(hg, [c], r)) for c in cs}

    checks = 0
    if check_distances:
        for i, b in enumerate(cand):
            full = _kernels.distances(g, b, r + 1)
            local = _kernels.distances(hg, to_new[b], r + 1)
            for b2 in cand[i + 1:]:
                d_full = full.get(b2, r + 1)
                d_local = local.get(to_new[b2], r + 1)
                if d_full != d_local:
                    raise AssertionError(
                        f"distance({b},{b2}) capped at {r + 1}: {d_local} in H, {d_full} in A"
                    )
                checks += 1

    found = _backtrack(cs, near, m)
    if found is None:
        return ScatteredResult(False, None, 2, checks)
    return ScatteredResult(True, tuple(to_old[c] for c in found), 2, checks)


def _backtrack(cs: list[int], near: dict, m: int):
    chosen: list[int] = []

    def go(start: int, blocked: frozenset) -> bool:
        if len(chosen) == m:
            return True
        for j in range(start, len(cs)):
            if len(cs) - j + len(chosen) < m:
                return False
            c = cs[j]
            if c in blocked:
                continue
            chosen.append(c)
            if go(j + 1, blocked | near[c]):
                return True
            chosen.pop()
        return False

    return list(chosen) if go(0, frozenset()) else None


def _build_cover(s: Structure, r: int, cfg: EngineConfig) -> Cover:
    if isinstance(cfg.strategy, Peleg):
        return peleg_cover(s.gaifman, r, cfg.strategy.k)
    return bfs_layer_cover(s.gaifman, r)


def check_leaf(s: Structure, leaf: BasicLocalSentence, cfg: EngineConfig | None = None) -> LeafRecord:
    cfg = cfg or EngineConfig()
    times = PhaseTimes()
    clock = time.perf_counter_ns
    t0 = clock()
    cover = _build_cover(s, leaf.r, cfg)
    t1 = clock()
    cover = kernels(s.gaifman, cover, leaf.r)
    t2 = clock()
    P, used = _satisfiers(
        s, cover, leaf.psi, leaf.r, leaf.var, cfg.parallel_pieces, cfg.max_workers
    )
    t3 = clock()
    res = scattered_exists(s, P, 2 * leaf.r, leaf.m)
    t4 = clock()
    times.cover_ns, times.kernels_ns = t1 - t0, t2 - t1
    times.local_ns, times.scattered_ns = t3 - t2, t4 - t3
    stats = cover.stats
    return LeafRecord(
        r=leaf.r, m=leaf.m, psi=to_text(leaf.psi), verdict=res.found, satisfiers=len(P),
        pieces=stats.piece_count, pieces_used=used, cover_total=stats.total_size,
        max_piece=stats.max_piece,
        witnesses=list(res.witnesses) if (cfg.record_witnesses and res.found) else None,
        phase=res.phase, times=times,
    )


def check_sentence(s: Structure, g: GaifmanSentence, cfg: EngineConfig | None = None) -> EvalReport:
    """Decide ``s |= g`` leaf by leaf and fold the verdicts."""
    cfg = cfg or EngineConfig()
    total = PhaseTimes()
    t0 = time.perf_counter_ns()
    s.gaifman
    total.gaifman_ns = time.perf_counter_ns() - t0
    records: list[LeafRecord] = []

    def leaf_value(leaf: BasicLocalSentence) -> bool:
        rec = check_leaf(s, leaf, cfg)
        records.append(rec)
        total.add(rec.times)
        return rec.verdict

    verdict = fold(g, leaf_value)
    return EvalReport(verdict, cfg.strategy.name, records, total)
