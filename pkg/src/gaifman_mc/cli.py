"""Command-line interface: ``gaifman-mc {gen,check,oracle,covers,bench}``.

stdout carries machine-readable output only (JSON or CSV); diagnostics go to
stderr. ``check`` and ``oracle`` exit with 0 for true, 1 for false and 2 on
any error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys

from . import generators
from .bench import rows_slope, rows_to_csv, run_bench
from .covers import bfs_layer_cover, kernels, peleg_cover, validate_cover
from .engine import BfsLayers, EngineConfig, Peleg, check_sentence
from .logic.evaluate import eval_naive
from .logic.gnf import eval_gnf_naive, load_gnf
from .logic.parser import parse_formula
from .logic.syntax import free_vars
from .structures import dump_structure, load_structure

EXIT_TRUE, EXIT_FALSE, EXIT_ERROR = 0, 1, 2
ORACLE_WARN_N = 60


class UsageError(Exception):
    pass


def _strategy(args):
    if args.strategy == "peleg":
        return Peleg(args.k)
    return BfsLayers()


def _err(msg: str) -> None:
    print(f"gaifman-mc: {msg}", file=sys.stderr)


def cmd_gen(args) -> int:
    params = generators.parse_params(args.params)
    s = generators.generate(args.family, params, args.seed)
    text = dump_structure(s)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
        sz = s.size()
        _err(f"wrote {args.family} with n={sz.universe}, ||A||={sz.total_size} to {args.output}")
    return 0


def cmd_check(args) -> int:
    s = load_structure(args.structure)
    g = load_gnf(args.gnf)
    cfg = EngineConfig(strategy=_strategy(args), parallel_pieces=args.parallel)
    rep = check_sentence(s, g, cfg)
    out = rep.to_dict()
    if isinstance(cfg.strategy, Peleg):
        out["k"] = cfg.strategy.k
    json.dump(out, sys.stdout, indent=1)
    sys.stdout.write("\n")
    return EXIT_TRUE if rep.verdict else EXIT_FALSE


def cmd_oracle(args) -> int:
    s = load_structure(args.structure)
    if s.n > ORACLE_WARN_N:
        _err(f"warning: brute-force oracle on n={s.n} > {ORACLE_WARN_N} may be very slow")
    if args.gnf:
        verdict = eval_gnf_naive(s, load_gnf(args.gnf))
    else:
        with open(args.formula, encoding="utf-8") as f:
            phi = parse_formula(f.read())
        free = free_vars(phi)
        if free:
            raise UsageError(f"formula must be a sentence; free variables: {sorted(free)}")
        verdict = eval_naive(s, phi, {})
    json.dump({"verdict": verdict}, sys.stdout)
    sys.stdout.write("\n")
    return EXIT_TRUE if verdict else EXIT_FALSE


COVER_COLUMNS = ["kind", "piece", "seed", "size", "kernel_size", "width_ub", "valid"]


def cmd_covers(args) -> int:
    s = load_structure(args.structure)
    g = s.gaifman
    n = g.n
    if args.strategy == "peleg":
        cover = peleg_cover(g, args.r, args.k)
    else:
        cover = bfs_layer_cover(g, args.r)
    cover = kernels(g, cover)
    report = validate_cover(g, cover, widths=True)
    bad = set(report.bad_pieces)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(COVER_COLUMNS)
    for i, piece in enumerate(cover.pieces):
        seed = cover.seeds[i] if cover.seeds else ""
        w.writerow(["piece", i, seed, len(piece), len(cover.kernels[i]), report.widths[i],
                    i not in bad])
    stats = cover.stats
    total = stats.total_size
    if args.strategy == "peleg":
        size_ok = total ** args.k <= n ** (args.k + 1)
        bound = f"n^(1+1/k) with n={n}, k={args.k}"
    else:
        size_ok = total <= (2 * args.r + 1) * n
        bound = f"(2r+1)n = {(2 * args.r + 1) * n}"
    valid = report.ok and size_ok
    w.writerow(["summary", stats.piece_count, "", total, sum(map(len, cover.kernels)),
                max(report.widths), valid])
    _err(f"pieces={stats.piece_count} total={total} max={stats.max_piece} "
         f"property1={report.property1} property2={report.property2} "
         f"size_bound[{bound}]={size_ok}")
    if report.uncovered:
        _err(f"balls not inside any piece: {report.uncovered[:10]}")
    if bad:
        _err(f"pieces not inside any {cover.kind.s}-ball: {sorted(bad)[:10]}")
    return 0 if valid else 1


def cmd_bench(args) -> int:
    try:
        sizes = [int(x) for x in args.sizes.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--sizes must be a comma-separated list of integers, got {args.sizes!r}")
    if not sizes:
        raise UsageError("--sizes is empty")
    if sizes != sorted(sizes):
        raise UsageError("--sizes must be ascending")
    g = load_gnf(args.gnf)
    cfg = EngineConfig(strategy=_strategy(args), record_witnesses=False)
    rows = run_bench(args.family, sizes, g, cfg, repeats=args.repeats, seed=args.seed)
    with open(args.out, "w", encoding="utf-8", newline="") as f:
        f.write(rows_to_csv(rows))
    slope = rows_slope(rows)
    json.dump({"out": args.out, "rows": len(rows), "slope": slope}, sys.stdout)
    sys.stdout.write("\n")
    if slope is None:
        _err("single size: no slope fitted")
    else:
        _err(f"log-log slope of total time vs n: {slope:.3f}")
    return 0


def _add_strategy(p, k_default=2):
    p.add_argument("--strategy", choices=("peleg", "bfs-layers"), default="bfs-layers")
    p.add_argument("--k", type=int, default=k_default, help="Peleg exponent (cover size n^(1+1/k))")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gaifman-mc", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a structure file")
    p.add_argument("--family", required=True, choices=generators.FAMILIES)
    p.add_argument("--params", default="", help="k=v,... e.g. width=8,height=8")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True, help="output path, '-' for stdout")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="decide a GNF sentence with the cover-based engine")
    p.add_argument("--structure", required=True)
    p.add_argument("--gnf", required=True)
    _add_strategy(p)
    p.add_argument("--parallel", action="store_true", help="evaluate pieces concurrently")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("oracle", help="brute-force verdict")
    p.add_argument("--structure", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--gnf")
    src.add_argument("--formula", help="file holding a first-order sentence")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("covers", help="build, validate and summarize a cover (CSV)")
    p.add_argument("--structure", required=True)
    p.add_argument("--r", type=int, required=True)
    _add_strategy(p)
    p.set_defaults(func=cmd_covers)

    p = sub.add_parser("bench", help="scaling benchmark (CSV)")
    p.add_argument("--family", required=True, choices=generators.FAMILIES)
    p.add_argument("--sizes", required=True, help="ascending list; grid sizes are side lengths")
    p.add_argument("--gnf", required=True)
    _add_strategy(p)
    p.add_argument("--out", required=True)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else 0
    if getattr(args, "k", 1) < 1:
        _err("--k must be >= 1")
        return EXIT_ERROR
    try:
        return args.func(args)
    except (OSError, ValueError, UsageError, RecursionError) as e:
        _err(str(e))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
