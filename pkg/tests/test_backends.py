import os
import random
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from gaifman_mc import backend, generators
from gaifman_mc.bench import compare_backends
from randgen import random_graph

BACKENDS = backend.available_backends()
needs_ext = pytest.mark.skipif("cython" not in BACKENDS, reason="compiled backend not built")


@needs_ext
def test_compiled_backend_is_default():
    if os.environ.get("GAIFMAN_MC_PURE") != "1":
        assert backend.BACKEND == "cython"


@needs_ext
@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9), st.integers(0, 4), st.integers(1, 3))
def test_backends_agree(seed, r, k):
    rng = random.Random(seed)
    g = random_graph(rng, rng.randint(1, 70), rng.uniform(0.0, 0.2)).gaifman
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    srcs = rng.sample(range(g.n), rng.randint(1, min(3, g.n)))
    assert py.ball(g, srcs, r) == cy.ball(g, srcs, r)
    assert py.distances(g, srcs[0], r) == cy.distances(g, srcs[0], r)
    assert py.bfs_forest(g) == cy.bfs_forest(g)
    rr = max(r, 1)
    assert py.peleg(g, rr, k) == cy.peleg(g, rr, k)
    pieces = py.peleg(g, rr, k)[0] + [sorted(rng.sample(range(g.n), rng.randint(1, g.n)))]
    assert py.kernel_sets(g, pieces, r) == cy.kernel_sets(g, pieces, r)


@needs_ext
def test_compiled_scratch_survives_many_calls():
    g = generators.grid(20, 20).gaifman
    cy, py = BACKENDS["cython"], BACKENDS["python"]
    for a in range(0, g.n, 7):
        assert cy.ball(g, [a], 3) == py.ball(g, [a], 3)
    assert cy.ball(g, [0, 399], 0) == [0, 399]


def test_pure_backend_selected_by_env():
    env = dict(os.environ, GAIFMAN_MC_PURE="1")
    code = ("import gaifman_mc as G; from gaifman_mc import generators as g, queries as q;"
            "print(G.BACKEND, G.check_sentence(g.grid(6, 6), q.bench_sentence()).verdict)")
    p = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert p.returncode == 0, p.stderr
    assert p.stdout.split() == ["python", "True"]


def test_compare_backends_smoke():
    rows = compare_backends(sides=(4, 8), repeats=1)
    assert {r["kernel"] for r in rows} == {"ball", "bfs_forest", "peleg", "kernel_sets"}
    assert all(r["python_ns"] > 0 for r in rows)
