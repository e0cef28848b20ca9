import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from gaifman_mc import generators
from gaifman_mc.covers import bfs_layer_cover, kernels, peleg_cover
from gaifman_mc.engine import (
    BfsLayers, EngineConfig, Peleg, check_leaf, check_sentence, local_satisfier_set,
    scattered_exists,
)
from gaifman_mc.logic import (
    BasicLocalSentence, Eq, GAnd, GNot, GOr, LocalityError, eval_gnf_naive, eval_naive,
    parse_formula,
)
from gaifman_mc.queries import bench_sentence, has_neighbor_psi, min_degree_psi, set_cover_gnf
from gaifman_mc.structures import Structure, Vocabulary
from randgen import random_gnf, random_psi, small_structure, sweep_structure

STRATEGIES = [BfsLayers(), Peleg(1), Peleg(2), Peleg(3)]


def all_dist(s):
    h = nx.Graph()
    h.add_nodes_from(range(s.n))
    h.add_edges_from(s.gaifman.edges())
    return dict(nx.all_pairs_shortest_path_length(h))


def brute_scattered(dist, P, r, m):
    far = lambda a, b: dist[a].get(b, 10**9) > r
    return any(all(far(a, b) for a, b in itertools.combinations(c, 2))
               for c in itertools.combinations(sorted(P), m))


# -- local satisfier sets --------------------------------------------------

def test_trivial_psi_gives_universe():
    s = generators.grid(4, 5)
    g = s.gaifman
    for cover in (peleg_cover(g, 1, 2), bfs_layer_cover(g, 1)):
        assert local_satisfier_set(s, kernels(g, cover), Eq("x", "x"), 1) == set(range(s.n))


def test_has_neighbor_excludes_isolated():
    s = Structure(Vocabulary.of(E=2), 6, {"E": [(0, 1), (1, 0), (2, 3), (3, 2)]})
    g = s.gaifman
    cover = kernels(g, peleg_cover(g, 1, 2))
    assert local_satisfier_set(s, cover, has_neighbor_psi(1), 1) == {0, 1, 2, 3}


def test_satisfier_set_errors():
    s = generators.path(4)
    g = s.gaifman
    cover = kernels(g, bfs_layer_cover(g, 1))
    with pytest.raises(LocalityError):
        local_satisfier_set(s, cover, parse_formula("exists y (E(x,y))"), 1)
    with pytest.raises(ValueError, match="no kernels"):
        local_satisfier_set(s, bfs_layer_cover(g, 1), Eq("x", "x"), 1)
    with pytest.raises(ValueError, match="radius"):
        local_satisfier_set(s, cover, has_neighbor_psi(2), 2)


@pytest.mark.parametrize("block", range(10))
def test_satisfier_set_matches_naive(block):
    # 500 trials in 10 blocks
    rng = random.Random(7000 + block)
    for _ in range(50):
        s = small_structure(rng, n_max=40)
        r = rng.randint(1, 2)
        psi = random_psi(rng, s.vocabulary, r)
        g = s.gaifman
        want = {a for a in range(s.n) if eval_naive(s, psi, {"x": a})}
        strat = rng.choice(STRATEGIES)
        cover = peleg_cover(g, r, strat.k) if isinstance(strat, Peleg) else bfs_layer_cover(g, r)
        cover = kernels(g, cover)
        assert local_satisfier_set(s, cover, psi, r) == want
        order = list(range(len(cover.pieces)))
        rng.shuffle(order)
        assert local_satisfier_set(s, cover.permuted(order), psi, r) == want


def test_parallel_pieces_same_result():
    s = generators.rand_deg(300, 4, seed=2)
    g = s.gaifman
    psi = min_degree_psi(3, 1)
    cover = kernels(g, bfs_layer_cover(g, 1))
    assert local_satisfier_set(s, cover, psi, 1, parallel=True) == local_satisfier_set(
        s, cover, psi, 1)


# -- scattered sets --------------------------------------------------------

def test_scattered_examples():
    s = generators.path(10)
    assert not scattered_exists(s, set(), 2, 2)
    assert scattered_exists(s, set(), 2, 2).phase == 0
    assert scattered_exists(s, {5}, 4, 1)
    assert scattered_exists(s, {0, 4, 9}, 3, 2)
    assert not scattered_exists(s, {0, 4, 9}, 9, 2)
    res = scattered_exists(s, {0, 4, 9}, 3, 3)
    assert res.found and res.witnesses == (0, 4, 9)


def test_scattered_path_brute_agrees():
    s = generators.path(10)
    dist = all_dist(s)
    for r, m in itertools.product(range(10), range(1, 4)):
        assert scattered_exists(s, {0, 4, 9}, r, m).found == brute_scattered(dist, {0, 4, 9}, r, m)


def test_scattered_phases():
    s = generators.path(5)
    P = {0, 1, 3}
    res = scattered_exists(s, {1, 2, 3, 4}, 2, 2)
    assert res.phase == 1
    res = scattered_exists(generators.cycle(6), {0, 2, 4}, 2, 2)
    assert res.phase == 2 and not res.found
    res = scattered_exists(s, P, 1, 3)
    assert res.phase == 2 and not res.found
    # greedy takes 0, drops 1, then takes 3
    assert scattered_exists(s, P, 1, 2).phase == 1


def test_scattered_phase_two_finds_non_greedy_choice():
    # a 4-cycle 0-1-3-2 with a tail 3-4-5-6
    s = Structure(Vocabulary.of(E=2), 7, {"E": [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (4, 5),
                                                (5, 6)]})
    dist = all_dist(s)
    for P in ({0, 3, 6}, {1, 2, 5, 6}, {0, 1, 2, 3, 4, 5, 6}):
        for r, m in itertools.product(range(1, 5), range(1, 4)):
            assert scattered_exists(s, P, r, m, True).found == brute_scattered(dist, P, r, m)


@pytest.mark.parametrize("block", range(10))
def test_scattered_random_with_distance_assertion(block):
    rng = random.Random(500 + block)
    for _ in range(50):
        s = small_structure(rng, n_max=40)
        dist = all_dist(s)
        r = rng.randint(0, 4)
        m = rng.randint(1, 3)
        P = {a for a in range(s.n) if rng.random() < rng.uniform(0.1, 0.9)}
        res = scattered_exists(s, P, r, m, check_distances=True)
        assert res.found == brute_scattered(dist, P, r, m)
        if res.found:
            assert len(res.witnesses) == m and set(res.witnesses) <= P
            for a, b in itertools.combinations(res.witnesses, 2):
                assert dist[a].get(b, 10**9) > r


def test_scattered_greedy_bound():
    s = generators.grid(6, 6)
    for m in range(1, 6):
        res = scattered_exists(s, set(range(36)), 2, m)
        assert res.phase == 1 and len(res.witnesses) == m


def test_scattered_rejects_bad_m():
    with pytest.raises(ValueError):
        scattered_exists(generators.path(3), {0}, 1, 0)


# -- whole sentences -------------------------------------------------------

def test_trivial_leaf_true_everywhere():
    leaf = BasicLocalSentence(1, 1, Eq("x", "x"))
    for s in (generators.grid(1, 1), generators.cycle(5), generators.rand_deg(50, 3, 1)):
        for strat in STRATEGIES:
            rep = check_sentence(s, leaf, EngineConfig(strat))
            assert rep.verdict and rep.leaves[0].satisfiers == s.n


def test_report_contents():
    s = generators.grid(8, 8)
    rep = check_sentence(s, bench_sentence(), EngineConfig(Peleg(2)))
    assert rep.verdict and rep.strategy == "peleg"
    (leaf,) = rep.leaves
    assert (leaf.r, leaf.m) == (1, 2)
    assert leaf.satisfiers == 64 - 4  # every vertex but the corners has degree >= 3
    assert leaf.pieces >= leaf.pieces_used >= 1
    a, b = leaf.witnesses
    assert all_dist(s)[a][b] > 2
    d = rep.to_dict()
    assert d["times"]["total_ns"] == sum(v for k, v in d["times"].items() if k != "total_ns")
    assert all(v >= 0 for v in d["times"].values())


def test_set_cover_queries():
    s = generators.set_cover(12, 8, 3, cover=3, seed=4)
    for c, want in ((2, False), (3, True)):
        leaf = set_cover_gnf(s, c)
        assert eval_gnf_naive(s, leaf) is want
        for strat in (BfsLayers(), Peleg(2)):
            assert check_sentence(s, leaf, EngineConfig(strat)).verdict is want


def test_small_family_example():
    # F = {{0,1},{1,2},{2,3}}: ground 0..3, sets 4..6
    s = Structure(Vocabulary.of(E=2, P=1), 7, {
        "E": [(0, 4), (1, 4), (1, 5), (2, 5), (2, 6), (3, 6)], "P": [(a,) for a in range(4)]})
    for c, want in ((1, False), (2, True), (3, True)):
        leaf = set_cover_gnf(s, c)
        assert eval_gnf_naive(s, leaf) is want
        assert check_sentence(s, leaf).verdict is want


def test_boolean_fold_and_leaf_records():
    s = generators.path(7)
    far3 = BasicLocalSentence(1, 3, has_neighbor_psi(1))
    far4 = BasicLocalSentence(1, 4, has_neighbor_psi(1))
    g = GAnd((far3, GNot(far4), GOr((far4, far3))))
    rep = check_sentence(s, g)
    assert rep.verdict and [l.verdict for l in rep.leaves] == [True, False, False, True]


def _witnesses_valid(s, g, rep, dist):
    for rec, leaf in zip(rep.leaves, _leaf_list(g)):
        if rec.verdict:
            assert len(rec.witnesses) == leaf.m
            for a in rec.witnesses:
                assert eval_naive(s, leaf.psi, {leaf.var: a})
            for a, b in itertools.combinations(rec.witnesses, 2):
                assert dist[a].get(b, 10**9) > 2 * leaf.r


def _leaf_list(g):
    from gaifman_mc.logic import leaves
    return list(leaves(g))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_engine_matches_oracle_and_is_strategy_independent(seed):
    rng = random.Random(seed)
    s = sweep_structure(rng) if rng.random() < 0.6 else small_structure(rng, 30)
    g = random_gnf(rng, s.vocabulary)
    want = eval_gnf_naive(s, g)
    dist = all_dist(s)
    for strat in STRATEGIES:
        rep = check_sentence(s, g, EngineConfig(strat))
        assert rep.verdict == want
        _witnesses_valid(s, g, rep, dist)


def test_check_leaf_defaults():
    rec = check_leaf(generators.cycle(9), BasicLocalSentence(1, 3, Eq("x", "x")))
    assert rec.verdict and rec.phase == 1 and rec.cover_total <= 3 * 9


def test_peleg_rejects_bad_k():
    with pytest.raises(ValueError):
        Peleg(0)
