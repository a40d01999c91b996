import json

import pytest

from coarsedouble.cli import main
from coarsedouble.reporting import canonical_reload, report_to_csv
from coarsedouble.scenarios import run_scenario


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_space_list_and_show(capsys):
    code, out = run_cli(capsys, "space", "list")
    assert code == 0
    assert "GeomLine" in out
    code, out = run_cli(capsys, "space", "show", "--space", "NatLine",
                        "--radius", "3")
    doc = json.loads(out)
    assert doc["results"]["points"] == [[0], [1], [2], [3]]
    assert doc["schema"] == "coarse-double/1"


def test_space_show_from_json_file(capsys, tmp_path):
    doc = {"space": "Tiny", "points": [[0], [2], [5]], "metric": "manhattan"}
    path = tmp_path / "space.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    code, out = run_cli(capsys, "space", "show", "--space-file", str(path),
                        "--radius", "3")
    assert code == 0
    assert json.loads(out)["results"]["points"] == [[0], [2]]


def test_proj_define_emits_tabulated_schema(capsys):
    code, out = run_cli(capsys, "proj", "define", "--space", "NatLine",
                        "--levels", "subset:evens", "--radius", "4")
    assert code == 0
    doc = json.loads(out)["results"]["levels"]
    assert doc["space"] == {"space": "NatLine"}
    assert doc["levels"] == [[[0], 1], [[1], 2], [[2], 1], [[3], 2], [[4], 1]]
    assert "tail" in doc
    assert json.loads(out)["results"]["validation"]["passed"]


def test_eval_command(capsys):
    code, out = run_cli(capsys, "eval", "--space", "NatLine", "--metric",
                        "zero:0", "--x", "3", "--y", "5", "--radius", "64")
    assert code == 0
    assert json.loads(out)["results"]["evaluation"]["value"] == 9


def test_compare_power_law_strict_exit(capsys):
    args = ["compare", "--space", "NatLine", "--left", "expr:ceil-sqrt",
            "--right", "expr:ceil-cbrt", "--radius", "1024"]
    code, out = run_cli(capsys, *args, "--mode", "coarse")
    assert code == 0
    assert json.loads(out)["results"]["verdict"]["status"] == "certified-on-window"
    code, out = run_cli(capsys, "--strict", *args, "--mode", "quasi")
    assert code == 3
    assert json.loads(out)["results"]["verdict"]["status"] == "inconclusive"


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as err:
        main(["eval", "--space", "NatLine"])
    assert err.value.code == 2


def test_determinism_and_roundtrip(capsys, tmp_path):
    args = ["algebra", "atoms", "--space", "NatLine", "--generators",
            "subset:powers:4;subset:powers:4:2", "--radius", "256"]
    _, out1 = run_cli(capsys, *args)
    _, out2 = run_cli(capsys, *args)
    doc1, doc2 = json.loads(out1), json.loads(out2)
    doc1.pop("meta", None)
    doc2.pop("meta", None)
    assert doc1 == doc2
    path = tmp_path / "report.json"
    path.write_text(out1, encoding="utf-8")
    code, out = run_cli(capsys, "report", "--infile", str(path), "--format", "json")
    assert code == 0
    reloaded = json.loads(out)["results"]["canonical"]
    assert reloaded == canonical_reload(out1)
    code, out = run_cli(capsys, "report", "--infile", str(path), "--format", "csv")
    assert code == 0


def test_measure_and_ideal_commands(capsys):
    code, out = run_cli(capsys, "measure", "nu-hat", "--space", "IntLine",
                        "--levels", "subset:halfline:-:0", "--schedule-base", "16")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["nu_hat"]["interval"]["lo"]
    code, out = run_cli(capsys, "ideal", "check", "--space", "NatLine",
                        "--levels", "subset:squares", "--radius", "32")
    assert code == 0
    assert json.loads(out)["results"]["au"]["au1_exact"] is True


def test_tau_command(capsys):
    code, out = run_cli(capsys, "tau", "--space", "GeomLine", "--filter-base",
                        "4", "--levels", "subset:powers:4", "--radius", "1024")
    assert code == 0
    assert json.loads(out)["results"]["verdict"]["value"] == 1


def test_scenario_command_and_csv(capsys):
    code, out = run_cli(capsys, "scenario", "run", "typeI")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] is True
    csv_text = report_to_csv(doc)
    assert csv_text.startswith("series,n,value")


def test_report_round_trip_is_stable():
    rep = run_scenario("lattice-laws")
    text1 = rep.canonical_json()
    rep2 = run_scenario("lattice-laws")
    assert text1 == rep2.canonical_json()


def test_diff_against_reports_drift():
    from coarsedouble.reporting import diff_against
    expected = {"a": 1, "b": True, "c": "x"}
    assert diff_against(expected, {"a": 1, "b": True, "c": "x"}) == []
    out = diff_against(expected, {"a": 2, "b": True})
    assert out == [{"key": "a", "expected": 1, "actual": 2},
                   {"key": "c", "expected": "x", "actual": None}]
