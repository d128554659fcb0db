import csv
import io
import json

import pytest

from indtrans.cli import main
from indtrans.errors import InputError
from indtrans.experiment import COLUMNS, ExperimentSpec, rows_to_csv, run_experiment
from indtrans.generators import gen_disjoint_cliques, gen_random_local_sparse
from indtrans.graph import MultipartiteGraph, Transversal
from indtrans.io import graph_from_json, load_graph, load_transversal, save_graph, save_transversal


@pytest.mark.parametrize("g", [MultipartiteGraph([]), gen_disjoint_cliques(2), MultipartiteGraph([[5], [], [9, 2]], [(5, 9)])])
def test_graph_round_trip(tmp_path, g):
    path = tmp_path / "g.json"
    save_graph(g, path)
    assert load_graph(path) == g


def test_transversal_round_trip_and_wrapper(tmp_path):
    t = Transversal({0: 4, 2: 7})
    save_transversal(t, tmp_path / "t.json")
    assert load_transversal(tmp_path / "t.json") == t
    (tmp_path / "w.json").write_text(json.dumps({"success": True, "transversal": {"0": 4, "2": 7}}))
    assert load_transversal(tmp_path / "w.json") == t


def test_parse_errors_carry_location(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"parts": [[0, 1],\n  [2,, 3]], "edges": []}')
    with pytest.raises(InputError, match=r"bad\.json:2:\d+"):
        load_graph(bad)
    with pytest.raises(InputError, match=r"parts\[1\]\[0\]"):
        graph_from_json({"parts": [[0], ["x"]], "edges": []})
    with pytest.raises(InputError, match="missing field 'edges'"):
        graph_from_json({"parts": [[0]]})
    with pytest.raises(InputError, match=r"edges\[0\]"):
        graph_from_json({"parts": [[0], [1]], "edges": [[0, 1, 2]]})
    with pytest.raises(InputError, match="cannot read"):
        load_graph(tmp_path / "missing.json")


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_gen_solve_verify(tmp_path, capsys):
    gpath, tpath = str(tmp_path / "g.json"), str(tmp_path / "t.json")
    code, _, _ = run_cli(capsys, "gen", "random", "--r", "20", "--n", "33", "--delta", "6", "--local", "6", "--seed", "3", "--out", gpath)
    assert code == 0
    code, out, _ = run_cli(capsys, "stats", gpath)
    stats = json.loads(out)
    assert code == 0 and stats["part_count"] == 20 and stats["lll_margin"] <= 1
    code, _, _ = run_cli(capsys, "solve", "lll", gpath, "--seed", "1", "--out", tpath)
    assert code == 0
    code, out, _ = run_cli(capsys, "verify", gpath, "--transversal", tpath)
    assert code == 0 and json.loads(out)["valid"]


def test_cli_exit_codes(tmp_path, capsys):
    gpath = str(tmp_path / "dc.json")
    assert main(["gen", "disjoint-cliques", "--delta", "2", "--out", gpath]) == 0
    code, out, _ = run_cli(capsys, "solve", "lll", gpath, "--max-resamples", "50")
    assert code == 1 and json.loads(out)["success"] is False
    code, _, err = run_cli(capsys, "solve", "nibble", gpath)
    assert code == 2 and json.loads(err)["error"] == "InputError"
    code, _, err = run_cli(capsys, "oracle", gpath, "--node-budget", "2")
    assert code == 3 and json.loads(err)["error"] == "BudgetExceeded"
    code, out, _ = run_cli(capsys, "oracle", gpath, "--count")
    assert code == 0 and json.loads(out)["count"] == 0
    bogus = tmp_path / "bogus.json"
    bogus.write_text("[")
    code, _, err = run_cli(capsys, "stats", str(bogus))
    assert code == 2 and "bogus.json:1" in json.loads(err)["message"]


def test_cli_invalid_transversal_exit_one(tmp_path, capsys):
    gpath, tpath = tmp_path / "g.json", tmp_path / "t.json"
    save_graph(MultipartiteGraph([[0], [1]], [(0, 1)]), gpath)
    save_transversal(Transversal({0: 0, 1: 1}), tpath)
    code, out, _ = run_cli(capsys, "verify", str(gpath), "--transversal", str(tpath))
    assert code == 1 and json.loads(out)["valid"] is False


def test_cli_reduce_failure_is_stage_tagged(tmp_path, capsys):
    gpath = tmp_path / "g.json"
    save_graph(gen_random_local_sparse(2, 64, 8, 4, seed=0), gpath)
    code, _, err = run_cli(
        capsys, "reduce", str(gpath), "--gamma", "0.5", "--epsilon", "1.0", "--delta", "8", "--max-retries", "2"
    )
    detail = json.loads(err)
    assert code == 1 and detail["error"] == "SolverFailure" and detail["stage"]


def test_cli_nibble_csv_trace(tmp_path, capsys):
    gpath = tmp_path / "g.json"
    save_graph(gen_random_local_sparse(60, 48, 16, 2, seed=0), gpath)
    code, out, _ = run_cli(capsys, "solve", "nibble", str(gpath), "--epsilon", "2.0", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows and {"t", "|T|", "min_part", "max_deg"} <= set(rows[0])


def test_cli_ksfree_and_list_coloring(tmp_path, capsys):
    lpath, gpath = str(tmp_path / "l.json"), str(tmp_path / "g.json")
    assert main(["gen", "list-coloring", "--vertices", "10", "--degree", "3", "--list-size", "17", "--palette", "20", "--out", lpath]) == 0
    assert main(["gen", "reduce-listcoloring", lpath, "--out", gpath]) == 0
    doc = json.loads(open(gpath).read())
    assert len(doc["labels"]) == 170
    code, out, _ = run_cli(capsys, "solve", "ksfree", gpath, "--s", "3", "--seed", "2")
    assert code == 0 and len(json.loads(out)["transversal"]) == 10


SPEC = {
    "generator": "random",
    "grid": {"r": [10], "n": [33], "delta": [6], "local": [6]},
    "solver": "lll",
    "repetitions": 1,
    "master_seed": 5,
}


def test_single_cell_experiment_has_one_row():
    rows = run_experiment(ExperimentSpec.from_json(SPEC))
    assert len(rows) == 1 and rows[0]["success"] and rows[0]["verified"]
    assert rows_to_csv(rows).splitlines()[0] == ",".join(COLUMNS)


def test_experiment_csv_is_byte_identical(tmp_path, capsys):
    spec = dict(SPEC, repetitions=3, grid={**SPEC["grid"], "r": [5, 10]})
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    outs = [str(tmp_path / f"o{i}.csv") for i in range(2)]
    for o in outs:
        assert main(["experiment", str(path), "--format", "csv", "--out", o]) == 0
    a, b = (open(o, "rb").read() for o in outs)
    assert a == b and len(a.splitlines()) == 7
    assert main(["experiment", str(path), "--format", "csv", "--out", outs[1], "--seed", "6"]) == 0
    assert open(outs[1], "rb").read() != a


def test_experiment_records_failures():
    spec = ExperimentSpec.from_json({"generator": "disjoint-cliques", "grid": {"delta": [2]}, "configs": [{"max_resamples": 20}]})
    row = run_experiment(spec)[0]
    assert not row["success"] and row["error"]
    with pytest.raises(InputError):
        ExperimentSpec.from_json({"generator": "nope", "grid": {"x": [1]}})
    with pytest.raises(InputError):
        ExperimentSpec.from_json({"generator": "random", "grid": {"r": [1]}, "colour": 1})
