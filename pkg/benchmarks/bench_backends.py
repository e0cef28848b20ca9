"""Compare the compiled and pure-Python graph kernels on square grids.

    python3 benchmarks/bench_backends.py [--sides 16,32,64,128] [--csv out.csv]
"""
import argparse
import csv
import sys

from gaifman_mc.bench import compare_backends


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sides", default="16,32,64,128")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--csv")
    args = ap.parse_args()
    rows = compare_backends([int(s) for s in args.sides.split(",")], repeats=args.repeats)
    if "cython_ns" not in rows[0]:
        print("compiled backend not built; only the Python timings are shown", file=sys.stderr)
    print(f"{'side':>5} {'n':>7} {'kernel':<12} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for row in rows:
        py = row["python_ns"] / 1e6
        cy = row.get("cython_ns")
        cy_s = f"{cy / 1e6:10.2f}" if cy else f"{'-':>10}"
        sp = f"{row['python_ns'] / cy:8.1f}" if cy else f"{'-':>8}"
        print(f"{row['side']:>5} {row['n']:>7} {row['kernel']:<12} {py:10.2f} {cy_s} {sp}")
    if args.csv:
        with open(args.csv, "w", newline="") as f:
            w = csv.DictWriter(f, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)


if __name__ == "__main__":
    main()
