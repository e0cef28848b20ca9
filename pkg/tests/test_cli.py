import csv
import io
import json
import subprocess
import sys

import networkx as nx
import pytest

from gaifman_mc.cli import main
from gaifman_mc.logic import dump_gnf, parse_gnf
from gaifman_mc.queries import bench_sentence, set_cover_gnf, set_cover_sentence
from gaifman_mc.structures import load_structure
from gaifman_mc.logic.syntax import to_text

TRIVIAL = '{"op": "leaf", "leaf": {"r": 1, "m": 1, "psi": "x = x"}}'
HAS_NEIGHBOR = ('{"op": "leaf", "leaf": {"r": 1, "m": 1, '
                '"psi": "exists y (dist(x,y) <= 1 and E(x,y))"}}')
EMPTY = '{"vocabulary": [{"name": "E", "arity": 2}], "universe": 5, "relations": {"E": []}}'


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return p
    return write


def gen(capsys, tmp_path, family, params, seed=0, name="s.json"):
    path = tmp_path / name
    code, out, _ = run(capsys, "gen", "--family", family, "--params", params, "--seed", seed,
                       "-o", path)
    assert code == 0 and out == ""
    return path


def test_gen_grid_edge_counts(capsys, tmp_path):
    s = load_structure(gen(capsys, tmp_path, "grid", "width=1,height=1"))
    assert s.n == 1 and not s.relations["E"]
    for w, h in ((1, 5), (2, 3), (4, 4), (7, 3)):
        s = load_structure(gen(capsys, tmp_path, "grid", f"width={w},height={h}"))
        undirected = nx.grid_2d_graph(w, h).number_of_edges()
        assert undirected == 2 * w * h - w - h
        assert len(s.relations["E"]) == 2 * undirected


def test_gen_is_deterministic(capsys, tmp_path):
    a = gen(capsys, tmp_path, "rand-deg", "n=100,deg=3", seed=7, name="a.json")
    b = gen(capsys, tmp_path, "rand-deg", "n=100,deg=3", seed=7, name="b.json")
    assert a.read_bytes() == b.read_bytes()
    s = load_structure(a)
    assert s.n == 100 and s.gaifman.valence() <= 3
    c = gen(capsys, tmp_path, "rand-deg", "n=100,deg=3", seed=8, name="c.json")
    assert c.read_bytes() != a.read_bytes()


def test_gen_to_stdout_and_errors(capsys):
    code, out, _ = run(capsys, "gen", "--family", "cycle", "--params", "n=4", "-o", "-")
    assert code == 0 and json.loads(out)["universe"] == 4
    code, out, err = run(capsys, "gen", "--family", "grid", "--params", "width=3", "-o", "-")
    assert code == 2 and out == "" and "height" in err
    code, _, err = run(capsys, "gen", "--family", "rand-deg", "--params", "n=5,deg=5", "-o", "-")
    assert code == 2
    code, _, err = run(capsys, "gen", "--family", "grid", "--params", "width", "-o", "-")
    assert code == 2 and "key=value" in err
    code, _, _ = run(capsys, "gen", "--family", "torus", "-o", "-")
    assert code == 2


def test_check_exit_codes(capsys, tmp_path, files):
    s = gen(capsys, tmp_path, "grid", "width=4,height=3")
    code, out, _ = run(capsys, "check", "--structure", s, "--gnf", files("t.json", TRIVIAL))
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] is True and rep["strategy"] == "bfs-layers"
    assert {"pieces", "cover_total", "max_piece", "witnesses", "times"} <= set(rep["leaves"][0])
    edgeless = files("e.json", EMPTY)
    code, out, _ = run(capsys, "check", "--structure", edgeless, "--gnf",
                       files("h.json", HAS_NEIGHBOR), "--strategy", "peleg", "--k", 3)
    assert code == 1 and json.loads(out)["verdict"] is False and json.loads(out)["k"] == 3


def test_check_errors(capsys, tmp_path, files):
    s = gen(capsys, tmp_path, "cycle", "n=5")
    bad = files("bad.json", '{"op": "leaf", "leaf": {"r": 1, "m": 1, "psi": "exists y (E(x,y))"}}')
    code, out, err = run(capsys, "check", "--structure", s, "--gnf", bad)
    assert code == 2 and out == "" and "not 1-local" in err
    broken = files("broken.json", '{"op": "leaf", "leaf": {"r": 1, "m": 1, "psi": "E(x,"}}')
    code, _, err = run(capsys, "check", "--structure", s, "--gnf", broken)
    assert code == 2 and "line 1 column 5" in err
    bad_s = files("bad_s.json", '{"vocabulary": [{"name": "E", "arity": 2}], "universe": 2, '
                                '"relations": {"E": [[0, 5]]}}')
    code, _, err = run(capsys, "check", "--structure", bad_s, "--gnf", files("t.json", TRIVIAL))
    assert code == 2 and "relations.E[0][1]" in err
    code, _, err = run(capsys, "check", "--structure", tmp_path / "missing.json", "--gnf", bad)
    assert code == 2
    code, _, err = run(capsys, "check", "--structure", s, "--gnf", bad, "--k", 0)
    assert code == 2
    code, _, _ = run(capsys, "check", "--structure", s)
    assert code == 2


def test_check_agrees_with_oracle(capsys, tmp_path, files):
    sentences = [TRIVIAL, HAS_NEIGHBOR, dump_gnf(bench_sentence()),
                 '{"op": "not", "children": [' + dump_gnf(bench_sentence()) + "]}"]
    structures = [gen(capsys, tmp_path, "grid", "width=5,height=5", name="g.json"),
                  gen(capsys, tmp_path, "cycle", "n=12", name="c.json"),
                  gen(capsys, tmp_path, "rand-deg", "n=40,deg=3", seed=2, name="r.json"),
                  files("e.json", EMPTY)]
    for i, text in enumerate(sentences):
        gnf = files(f"q{i}.json", text)
        for s in structures:
            want, _, _ = run(capsys, "oracle", "--structure", s, "--gnf", gnf)
            for strat in ("peleg", "bfs-layers"):
                got, _, _ = run(capsys, "check", "--structure", s, "--gnf", gnf, "--strategy",
                                strat, "--k", 2)
                assert got == want


def test_oracle_set_cover_formulas(capsys, tmp_path, files):
    s = gen(capsys, tmp_path, "setcover", "ground=10,sets=6,freq=3,cover=2", seed=5)
    for c, want in ((1, 1), (2, 0), (3, 0)):
        phi = files(f"phi{c}.txt", to_text(set_cover_sentence(c)))
        code, out, _ = run(capsys, "oracle", "--structure", s, "--formula", phi)
        assert code == want and json.loads(out)["verdict"] is (want == 0)
    # same answers through the GNF form and the engine
    st = load_structure(s)
    for c in (1, 2):
        gnf = files(f"g{c}.json", dump_gnf(set_cover_gnf(st, c)))
        a, _, _ = run(capsys, "oracle", "--structure", s, "--gnf", gnf)
        b, _, _ = run(capsys, "check", "--structure", s, "--gnf", gnf)
        assert a == b == (0 if c == 2 else 1)


def test_oracle_misc(capsys, tmp_path, files):
    e = files("e.json", EMPTY)
    code, out, _ = run(capsys, "oracle", "--structure", e, "--formula",
                       files("p.txt", "exists x exists y (E(x,y))"))
    assert code == 1 and json.loads(out) == {"verdict": False}
    code, _, err = run(capsys, "oracle", "--structure", e, "--formula", files("f.txt", "E(x,y)"))
    assert code == 2 and "free variables" in err
    big = gen(capsys, tmp_path, "cycle", "n=61")
    code, _, err = run(capsys, "oracle", "--structure", big, "--gnf", files("t.json", TRIVIAL))
    assert code == 0 and "warning" in err
    code, _, _ = run(capsys, "oracle", "--structure", e)
    assert code == 2


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_covers_command(capsys, tmp_path):
    s = gen(capsys, tmp_path, "grid", "width=16,height=16")
    code, out, err = run(capsys, "covers", "--structure", s, "--r", 1, "--strategy", "peleg",
                         "--k", 2)
    rows = read_csv(out)
    summary = rows[-1]
    assert code == 0 and summary["kind"] == "summary" and summary["valid"] == "True"
    assert int(summary["size"]) <= 4096
    assert int(summary["piece"]) == len(rows) - 1
    assert sum(int(r["size"]) for r in rows[:-1]) == int(summary["size"])
    for r in (1, 2, 3):
        code, out, _ = run(capsys, "covers", "--structure", s, "--r", r, "--strategy",
                           "bfs-layers")
        summary = read_csv(out)[-1]
        assert code == 0 and int(summary["size"]) <= (2 * r + 1) * 256
        assert int(summary["width_ub"]) <= 3 * r


def test_covers_single_vertex(capsys, tmp_path):
    s = gen(capsys, tmp_path, "grid", "width=1,height=1")
    for strat in ("peleg", "bfs-layers"):
        code, out, _ = run(capsys, "covers", "--structure", s, "--r", 2, "--strategy", strat)
        rows = read_csv(out)
        assert code == 0 and len(rows) == 2 and rows[-1]["valid"] == "True"


def test_bench_command(capsys, tmp_path, files):
    gnf = files("b.json", dump_gnf(bench_sentence()))
    out_csv = tmp_path / "bench.csv"
    code, out, err = run(capsys, "bench", "--family", "grid", "--sizes", "4,8,12", "--gnf", gnf,
                         "--strategy", "peleg", "--k", 2, "--out", out_csv, "--repeats", 1)
    assert code == 0 and json.loads(out)["rows"] == 3 and json.loads(out)["slope"] is not None
    rows = read_csv(out_csv.read_text())
    assert [int(r["n"]) for r in rows] == [16, 64, 144]
    for r in rows:
        parts = sum(int(r[k]) for k in ("gaifman_ns", "cover_ns", "kernels_ns", "local_ns",
                                        "scattered_ns"))
        assert parts == int(r["total_ns"]) and all(int(r[k]) >= 0 for k in r if k.endswith("_ns"))
    code, out, err = run(capsys, "bench", "--family", "cycle", "--sizes", "10", "--gnf", gnf,
                         "--out", out_csv, "--repeats", 1)
    assert code == 0 and json.loads(out)["slope"] is None and "no slope" in err
    assert len(read_csv(out_csv.read_text())) == 1
    code, _, err = run(capsys, "bench", "--family", "grid", "--sizes", "8,4", "--gnf", gnf,
                       "--out", out_csv)
    assert code == 2 and "ascending" in err


def test_module_entry_point(tmp_path):
    p = subprocess.run([sys.executable, "-m", "gaifman_mc", "gen", "--family", "cycle",
                        "--params", "n=3", "-o", "-"], capture_output=True, text=True)
    assert p.returncode == 0 and json.loads(p.stdout)["universe"] == 3
    p = subprocess.run([sys.executable, "-m", "gaifman_mc", "--help"], capture_output=True,
                       text=True)
    assert p.returncode == 0 and "check" in p.stdout


def test_gnf_file_helpers_round_trip():
    assert parse_gnf(TRIVIAL) == parse_gnf(dump_gnf(parse_gnf(TRIVIAL)))
