import json

import pytest

from meanlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_density_report(capsys):
    code, out, _ = run(capsys, "density", "--set", "3Z")
    rep = json.loads(out)
    assert code == 0
    assert rep["body"]["upper"]["lower"] == rep["body"]["upper"]["upper"] == "1/3"
    assert rep["body"]["upper"]["mode"] == "exact"
    hdr = rep["header"]
    assert hdr["version"] and hdr["seed"] == 7 and hdr["config"]["radius"] == 8192


def test_classify_non_transitive_is_an_error(capsys):
    code, out, err = run(capsys, "classify", "--system", "sft:01,10")
    assert code == 1 and not out
    assert json.loads(err) == {"error": "DichotomyError", "message": "dichotomy requires transitivity"}


def test_syntax_error(capsys):
    code, _, err = run(capsys, "density", "--set", "2Z+")
    assert code == 1 and json.loads(err)["error"] == "DSLSyntaxError"


def test_csv_entropy(capsys, tmp_path):
    out = tmp_path / "h.csv"
    code, _, _ = run(capsys, "entropy", "--system", "sft:golden", "--nmax", "3", "--format", "csv", "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "system,n,size,count,value" and lines[3].startswith("sft:golden,3,3,5,")


def test_csv_unavailable(capsys):
    code, _, err = run(capsys, "density", "--set", "3Z", "--format", "csv")
    assert code == 1 and "csv" in err


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"command": "density", "set": "5Z+2", "n": 4}))
    code, out, _ = run(capsys, "--config", str(cfg))
    rep = json.loads(out)
    assert code == 0 and rep["body"]["upper"]["lower"] == "1/5" and rep["header"]["config"]["n"] == 4
    # command-line flags override the file
    code, out, _ = run(capsys, "density", "--config", str(cfg), "--set", "2Z")
    assert json.loads(out)["body"]["upper"]["lower"] == "1/2"
    cfg.write_text(json.dumps({"command": "density", "bogus": 1}))
    code, _, err = run(capsys, "--config", str(cfg))
    assert code == 1 and "bogus" in err


def test_global_flags_before_command(capsys):
    code, out, _ = run(capsys, "--seed", "3", "density", "--set", "3Z")
    assert json.loads(out)["header"]["seed"] == 3


@pytest.mark.parametrize("argv", [
    ("meandist", "--system", "fullshift:2", "--x", "periodic:01", "--y", "periodic:0011"),
    ("independence", "--system", "sft:golden", "--fmax", "6"),
    ("entropy", "--system", "fullshift:2", "--nmax", "4", "--measure", "uniform"),
    ("correspond", "--set", "3Z+1", "--windows", "3,6"),
    ("lemma61", "--instances", "3"),
    ("classify", "--system", "periodic:001"),
])
def test_commands_run_and_are_deterministic(capsys, argv):
    code, a, _ = run(capsys, *argv)
    code2, b, _ = run(capsys, *argv)
    assert code == code2 == 0 and a == b
    assert "mode" in json.dumps(json.loads(a)["body"])


def test_meandist_values(capsys):
    _, out, _ = run(capsys, "meandist", "--system", "fullshift:2", "--x", "periodic:01", "--y", "periodic:0011")
    body = json.loads(out)["body"]
    assert body["banach"]["lower"] == body["weyl"]["upper"] == "1/2"


def test_independence_values(capsys):
    _, out, _ = run(capsys, "independence", "--system", "sft:golden", "--fmax", "6")
    body = json.loads(out)["body"]
    assert body["densityLower"] == body["densityUpper"] == "1/2"


def test_verify_suite_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "density")
    rep = json.loads(out)
    assert code == 0 and rep["body"]["passed"] and [r["id"] for r in rep["body"]["rows"]] == [1, 2]


def test_no_command(capsys):
    code, _, err = run(capsys)
    assert code == 1 and "command" in err
