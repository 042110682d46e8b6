import csv
import io
import json

import pytest

from fixtures import FIG1_DOC, FIG1_ORIENTATIONS
from gridtree.cli import BENCH_COLUMNS, approx, exact, run
from gridtree.model import INF


@pytest.fixture
def files(tmp_path):
    inst = tmp_path / "fig1.json"
    inst.write_text(json.dumps(FIG1_DOC))
    paths = {"instance": str(inst)}
    for label, arcs in FIG1_ORIENTATIONS.items():
        p = tmp_path / ("o%s.json" % label)
        p.write_text(json.dumps({"arcs": arcs}))
        paths[label] = str(p)
    return paths


def call(argv):
    out = io.StringIO()
    code = run(argv, out)
    return code, out.getvalue()


def test_number_rendering():
    from fractions import Fraction
    assert exact(Fraction(7, 10)) == "7/10" and exact(Fraction(3)) == "3"
    assert approx(Fraction(1267488, 21125)) == "≈59.9994"
    assert approx(Fraction(1, 3)) == "≈0.333333"
    assert exact(INF) == approx(INF) == "+inf"


def test_solve_min_max_load(files):
    code, text = call(["solve", "--objective", "min-max-load", "--instance", files["instance"]])
    doc = json.loads(text)
    assert code == 0 and doc["value"]["exact"] == "7/10" and doc["iterations"] > 0


@pytest.mark.parametrize("objective", ["max-min-load", "min-reserve"])
def test_solve_fptas(files, objective):
    code, text = call(["solve", "--objective", objective, "--eps-prime", "1/10",
                       "--instance", files["instance"]])
    doc = json.loads(text)
    assert code == 0
    assert set(doc["table_stats"]) == {"grid_size", "entries", "rational_ops"}
    assert "exact" in doc["rounded_value"] and doc["orientation"]["arcs"]


def test_check_reports_demand_violation(files):
    code, text = call(["check", "--instance", files["instance"], "--orientation", files["e"]])
    doc = json.loads(text)
    assert code == 1 and not doc["feasible"]
    assert {"node": "p2", "kind": "demand"} in doc["violations"]
    code, _ = call(["check", "--instance", files["instance"], "--orientation", files["b"]])
    assert code == 0


def test_flow_report(files):
    code, text = call(["flow", "--instance", files["instance"], "--orientation", files["b"],
                       "--rounded", "--eps-prime", "1/10"])
    doc = json.loads(text)
    assert code == 0
    assert doc["loads"]["s1"] == {"exact": "3/5", "approx": "≈0.6"}
    assert doc["rounded"]["eps"] == "1/42250"
    flows = {tuple(a["arc"]): a["flow"]["exact"] for a in doc["rounded"]["arcs"]}
    assert flows[("s1", "p3")] == "211248/21125"


def test_oracle(files):
    code, text = call(["oracle", "--instance", files["instance"], "--objective", "min-r"])
    doc = json.loads(text)
    assert code == 0 and doc["value"] == "1/5" and doc["count_feasible"] == 2


def test_oracle_limit(files, monkeypatch):
    monkeypatch.setenv("GRIDTREE_ORACLE_LIMIT", "3")
    code, _ = call(["oracle", "--instance", files["instance"], "--objective", "min-r"])
    assert code == 2


def test_infeasible_solve(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"nodes": [{"id": "s", "kind": "source", "prod": 4},
                                       {"id": "p", "kind": "sink", "pow": 5}],
                             "edges": [["s", "p"]]}))
    for objective in ("min-max-load", "max-min-load", "min-reserve"):
        code, text = call(["solve", "--objective", objective, "--instance", str(p)])
        assert code == 1 and json.loads(text)["value"] is None


@pytest.mark.parametrize("argv", [
    [], ["solve"], ["solve", "--objective", "fastest", "--instance", "x"],
    ["flow", "--instance", "/nonexistent.json", "--orientation", "x"],
    ["bench", "--sizes", "a,b"], ["solve", "--objective", "max-min-load", "--eps-prime", "x/y",
                                  "--instance", "x"],
])
def test_usage_errors(argv):
    assert call(argv)[0] == 2


def test_invalid_instance(tmp_path):
    p = tmp_path / "cycle.json"
    p.write_text("{broken")
    assert call(["solve", "--objective", "min-max-load", "--instance", str(p)])[0] == 2


def test_generate(tmp_path):
    out = tmp_path / "red.json"
    code, _ = call(["generate", "reduction", "--xs", "2,3,4,5,6,7,8", "--B", "9", "--out", str(out)])
    assert code == 0
    meta = json.loads((tmp_path / "red.json.meta.json").read_text())
    inst = json.loads(out.read_text())
    assert meta["N"] == len(inst["nodes"]) and meta["m"] == 8
    code, text = call(["generate", "random", "--n", "6", "--seed", "3"])
    assert code == 0 and len(json.loads(text)["nodes"]) == 6
    code, text = call(["generate", "gadget", "--x", "2", "--m", "3", "--meta", str(tmp_path / "g.json")])
    assert json.loads((tmp_path / "g.json").read_text())["terminal_flow"] == "9/4"
    assert call(["generate", "gadget"])[0] == 2
    assert call(["generate", "reduction", "--xs", "1,2", "--B", "2"])[0] == 2


def test_bench_deterministic():
    argv = ["bench", "--suite", "random", "--sizes", "5,6", "--seeds", "2", "--fixed-time"]
    code, first = call(argv)
    assert code == 0
    assert call(argv)[1] == first
    rows = list(csv.DictReader(io.StringIO(first)))
    assert list(rows[0]) == BENCH_COLUMNS
    assert len(rows) == 2 * 2 * 3
