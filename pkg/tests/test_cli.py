import json
import subprocess
import sys

import numpy as np
import pytest

from mweb import io
from mweb.cli import main
from mweb.core import Biclique, WeightedBipartiteGraph, biclique_weight
from mweb.mdlh import Summary, validate_summary
from mweb.reduce import SimpleGraph


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(argv, capsys):
    code, out, err = run(argv, capsys)
    return code, (json.loads(out) if out else None), err


@pytest.fixture
def p3(tmp_path):
    path = tmp_path / "p3.json"
    io.write_json(path, SimpleGraph.path(3).to_dict())
    return path


def test_verify_clique_from_file(p3, capsys):
    code, rep, _ = run_json(["verify", "--kind", "clique", "--graph", str(p3)], capsys)
    assert code == 0 and rep["passed"] and rep["trials"][0]["clique_number"] == 2
    code, rep, _ = run_json(["reduce", "verify", "--kind", "clique", "--graph", str(p3)], capsys)
    assert code == 0 and rep["trials"][0]["mweb_opt"] == 2


def test_clique_to_mweb_then_solve(p3, tmp_path, capsys):
    m = tmp_path / "m.json"
    assert main(["reduce", "clique-to-mweb", "--in", str(p3), "--out", str(m)]) == 0
    g = io.read_graph(m)
    assert g.weights.tolist() == [[1, 0, -1], [0, 1, 0], [-1, 0, 1]]
    for method in ("exact-enumeration", "branch-and-bound"):
        code, res, _ = run_json(["solve", "--in", str(m), "--method", method], capsys)
        assert code == 0 and res["value"] == 2 and res["optimal"]
    code, res, _ = run_json(["solve", "--in", str(m), "--method", "local-search", "--seed", "1"], capsys)
    assert code == 0 and res["value"] <= 2


def test_solve_exit_codes(tmp_path, capsys, monkeypatch):
    g = tmp_path / "g.json"
    io.write_graph(g, WeightedBipartiteGraph(np.ones((5, 5))))
    code, _, err = run(["solve", "--in", str(g), "--cap", "3"], capsys)
    assert code == 3 and "capacity" in err
    monkeypatch.delenv("MWEB_SEED", raising=False)
    code, _, err = run(["solve", "--in", str(g), "--method", "local-search"], capsys)
    assert code == 1 and "--seed" in err
    big = tmp_path / "big.json"
    rng = np.random.default_rng(0)
    io.write_graph(big, WeightedBipartiteGraph(rng.choice([-1.0, 1.0], size=(40, 40))))
    code, res, _ = run_json(["solve", "--in", str(big), "--method", "branch-and-bound",
                             "--time-limit", "0.01"], capsys)
    assert code == 2 and res["optimal"] is False


def test_parse_errors_report_position(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n1": 1,\n "n2": 1, "weights": [1,]}')
    code, _, err = run(["solve", "--in", str(bad)], capsys)
    assert code == 1 and "bad.json:2:" in err
    tsv = tmp_path / "bad.tsv"
    tsv.write_text("0\t1\n1\tx\n")
    code, _, err = run(["mdlh", "solve", "--in", str(tsv)], capsys)
    assert code == 1 and "bad.tsv:2:3" in err
    schema = tmp_path / "schema.json"
    schema.write_text('{"n1": 2, "n2": 2, "weights": [1]}')
    code, _, err = run(["solve", "--in", str(schema)], capsys)
    assert code == 1 and "n1*n2" in err


def test_gen_kinds(tmp_path, capsys):
    out = tmp_path / "b.tsv"
    assert main(["gen", "--kind", "random-binary", "--n1", "4", "--n2", "4", "--density", "0.25",
                 "--seed", "7", "--out", str(out)]) == 0
    m = io.read_tsv(out)
    assert m.shape == (4, 4) and set(np.unique(m)) <= {0, 1}
    assert out.read_text().startswith("# manifest: ")

    code, _, err = run(["gen", "--kind", "random-binary", "--density", "1.2", "--seed", "1"], capsys)
    assert code == 1 and "density" in err

    code, sg, _ = run_json(["gen", "--kind", "random-clique-graph", "--n", "6", "--seed", "2"], capsys)
    assert code == 0 and SimpleGraph.from_dict(sg).n == 6

    code, g, _ = run_json(["gen", "--kind", "random-weighted", "--n1", "3", "--n2", "5",
                           "--weights=-2,-1,3", "--seed", "3"], capsys)
    assert code == 0 and set(g["weights"]) <= {-2, -1, 3}


def test_planted_biclique_recovered(tmp_path, capsys):
    path = tmp_path / "planted.json"
    assert main(["gen", "--kind", "planted-biclique", "--n1", "8", "--n2", "8", "--block-rows", "3",
                 "--block-cols", "3", "--weights=-1,1", "--density", "0.3", "--seed", "11",
                 "--out", str(path)]) == 0
    data = io.load_json(path)
    planted = data["manifest"]["planted"]
    g = WeightedBipartiteGraph.from_dict(data)
    assert biclique_weight(g, Biclique(planted["u1"], planted["u2"])) == planted["weight"] >= 9
    code, res, _ = run_json(["solve", "--in", str(path)], capsys)
    assert res["value"] >= planted["weight"]


def test_samba_commands(tmp_path, capsys):
    m = np.zeros((4, 4), dtype=int)
    m[np.ix_([0, 1], [2, 3])] = 1
    tsv = tmp_path / "planted.tsv"
    io.write_tsv(tsv, m)
    code, res, _ = run_json(["samba", "find", "--model", "simple", "--in", str(tsv)], capsys)
    assert code == 0 and (res["u1"], res["u2"]) == ([0, 1], [2, 3])
    assert res["score"] == pytest.approx(4.0)
    code, res, _ = run_json(["samba", "score", "--in", str(tsv), "--u1", "0", "--u2", "2"], capsys)
    assert res["score"] == pytest.approx(1.0) and res["p"] == 0.25
    params = tmp_path / "p.json"
    io.write_json(params, {"p": [0.25] * 16, "p_c": 0.5})
    code, res, _ = run_json(["samba", "find", "--model", "refined", "--params", str(params),
                             "--in", str(tsv)], capsys)
    assert code == 0 and (res["u1"], res["u2"]) == ([0, 1], [2, 3])
    code, _, err = run(["samba", "find", "--model", "refined", "--in", str(tsv)], capsys)
    assert code == 1


def test_mdlh_commands(tmp_path, capsys):
    tsv = tmp_path / "ones-row.tsv"
    io.write_tsv(tsv, [[1, 1], [0, 0]])
    code, res, _ = run_json(["mdlh", "solve", "--in", str(tsv)], capsys)
    assert code == 0 and res["length"] == 1 and res["regions"] == [{"kind": "row", "i": 0}]
    assert validate_summary([[1, 1], [0, 0]], Summary.from_dict(res))
    code, res, _ = run_json(["mdlh", "verify", "--max-dim", "4", "--trials", "20", "--seed", "5"], capsys)
    assert code == 0 and res["passed"] and len(res["trials"]) == 20


def test_reduce_product_and_problem_p(tmp_path, capsys):
    g = tmp_path / "g.json"
    io.write_graph(g, WeightedBipartiteGraph([[0, 1], [0, 1]]))
    code, prod, _ = run_json(["reduce", "product", "--in", str(g), "--copies", "2", "--seed", "9"], capsys)
    assert code == 0 and prod["n1"] == 4 and prod["manifest"]["q"] == 0.5
    code, _, err = run(["reduce", "product", "--in", str(g), "--alpha", "2", "--seed", "9"], capsys)
    assert code == 1
    h = tmp_path / "h.json"
    io.write_graph(h, WeightedBipartiteGraph([[1]]))
    code, dup, _ = run_json(["reduce", "problem-p", "--in", str(h)], capsys)
    assert (dup["n1"], dup["n2"]) == (4, 4)


def test_verify_random_kinds(capsys):
    code, rep, _ = run_json(["verify", "--kind", "problem-p", "--trials", "5", "--seed", "1"], capsys)
    assert code == 0 and rep["passed"]
    code, rep, _ = run_json(["verify", "--kind", "product", "--trials", "2000", "--seed", "1"], capsys)
    assert code == 0 and rep["passed"]


def test_seed_env_override(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("MWEB_SEED", "42")
    code, a, _ = run_json(["--no-timing", "gen", "--kind", "random-clique-graph", "--n", "5"], capsys)
    code, b, _ = run_json(["--no-timing", "gen", "--kind", "random-clique-graph", "--n", "5",
                           "--seed", "42"], capsys)
    assert a["edges"] == b["edges"] and a["manifest"]["seed"] == 42


def test_module_entry_point(tmp_path):
    tsv = tmp_path / "m.tsv"
    io.write_tsv(tsv, [[1, 0], [0, 1]])
    proc = subprocess.run([sys.executable, "-m", "mweb", "mdlh", "solve", "--in", str(tsv)],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["length"] == 2


def test_file_round_trips(tmp_path, rng):
    for _ in range(10):
        g = WeightedBipartiteGraph(rng.normal(size=(3, 4)).round(3))
        io.write_graph(tmp_path / "g.json", g)
        assert io.read_graph(tmp_path / "g.json") == g
        m = (rng.random((3, 5)) < 0.5).astype(int)
        io.write_tsv(tmp_path / "m.tsv", m, {"seed": 1})
        assert np.array_equal(io.read_tsv(tmp_path / "m.tsv"), m)
    sg = SimpleGraph.path(4)
    assert SimpleGraph.from_dict(json.loads(json.dumps(sg.to_dict()))) == sg


def test_usage_error_exits_one(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["solve"])
    assert exc.value.code == 1
