"""Scaling benchmark: run the engine over a family of growing structures."""
from __future__ import annotations

import csv
import importlib
import io
import time
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import generators
from .engine import EngineConfig, check_sentence
from .logic.gnf import GaifmanSentence


@dataclass(frozen=True)
class BenchRow:
    family: str
    size: int
    n: int
    total_size: int
    gaifman_ns: int
    cover_ns: int
    kernels_ns: int
    local_ns: int
    scattered_ns: int
    total_ns: int
    verdict: bool


COLUMNS = [f.name for f in fields(BenchRow)]


def run_bench(
    family: str,
    sizes,
    gnf: GaifmanSentence,
    cfg: EngineConfig | None = None,
    repeats: int = 3,
    seed: int = 0,
) -> list[BenchRow]:
    """One row per size; every phase time is the minimum over ``repeats`` runs.

    Structures are generated outside the timed region and rebuilt for each run
    so the Gaifman graph is never reused from a cache.
    """
    cfg = cfg or EngineConfig(record_witnesses=False)
    rows = []
    for size in sizes:
        best = None
        verdict = None
        for _ in range(max(1, repeats)):
            s = generators.sized(family, size, seed)
            rep = check_sentence(s, gnf, cfg)
            if verdict is not None and rep.verdict != verdict:
                raise RuntimeError(f"verdict changed between runs at size {size}")
            verdict = rep.verdict
            t = rep.times
            cur = (t.gaifman_ns, t.cover_ns, t.kernels_ns, t.local_ns, t.scattered_ns)
            best = cur if best is None else tuple(map(min, best, cur))
        sz = s.size()
        rows.append(BenchRow(family, size, sz.universe, sz.total_size, *best, sum(best), verdict))
    rows.sort(key=lambda row: row.n)
    return rows


def fit_slope(xs, ys) -> float | None:
    """Least-squares slope of log(ys) against log(xs); None with fewer than two points."""
    if len(xs) < 2:
        return None
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.maximum(np.asarray(ys, dtype=float), 1.0))
    return float(np.polyfit(lx, ly, 1)[0])


def rows_slope(rows: list[BenchRow]) -> float | None:
    return fit_slope([r.n for r in rows], [r.total_ns for r in rows])


def rows_to_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(asdict(row))
    return buf.getvalue()


def _time_min(fn, repeats):
    best = None
    for _ in range(repeats):
        t0 = time.perf_counter_ns()
        fn()
        dt = time.perf_counter_ns() - t0
        best = dt if best is None else min(best, dt)
    return best


def compare_backends(sides=(16, 32, 64, 128), r: int = 1, k: int = 2, repeats: int = 3) -> list[dict]:
    """Time the graph kernels of both backends on square grids.

    Returns one dict per (side, kernel) with nanoseconds for each available
    backend; results are checked for equality along the way.
    """
    mods = {"python": importlib.import_module("gaifman_mc._pykernels")}
    try:
        mods["cython"] = importlib.import_module("gaifman_mc._ckernels")
    except ImportError:
        pass
    out = []
    for side in sides:
        g = generators.grid(side, side).gaifman
        pieces = mods["python"].peleg(g, r, k)[0]
        jobs = {
            "ball": lambda m: m.ball(g, [0], side),
            "bfs_forest": lambda m: m.bfs_forest(g),
            "peleg": lambda m: m.peleg(g, r, k),
            "kernel_sets": lambda m: m.kernel_sets(g, pieces, r),
        }
        for name, job in jobs.items():
            results = {b: job(m) for b, m in mods.items()}
            ref = results["python"]
            for b, res in results.items():
                if res != ref:
                    raise AssertionError(f"{b} backend disagrees on {name} (side {side})")
            row = {"side": side, "n": g.n, "kernel": name}
            for b, m in mods.items():
                row[f"{b}_ns"] = _time_min(lambda: job(m), repeats)
            out.append(row)
    return out
