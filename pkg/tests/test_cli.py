"""CLI: subcommands, exit codes, JSON/CSV outputs, env cap override."""
import csv
import json

import pytest

from epsolve.chains import cocone_to_json, colimit_finite
from epsolve.cli import main
from epsolve.suite import counterexample_cocone
from tests.test_chains import n1_chain


@pytest.fixture
def counterexample_path(tmp_path):
    path = tmp_path / "counterexample.json"
    path.write_text(json.dumps(cocone_to_json(counterexample_cocone())))
    return str(path)


@pytest.fixture
def canonical_path(tmp_path):
    path = tmp_path / "canonical.json"
    path.write_text(json.dumps(cocone_to_json(colimit_finite(n1_chain()))))
    return str(path)


# ---------------------------------------------------------------------------
# solve

def test_solve_prints_stages(capsys):
    assert main(["solve", "D = lift(D)", "--depth", "4"]) == 0
    out = capsys.readouterr().out
    assert "stabilized_at: None" in out
    assert "canonical_form" in out


def test_solve_json_deterministic(tmp_path):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["solve", "D = lift(D)", "--depth", "4", "--json", str(p1)]) == 0
    assert main(["solve", "D = lift(D)", "--depth", "4", "--json", str(p2)]) == 0
    assert p1.read_bytes() == p2.read_bytes()
    payload = json.loads(p1.read_text())
    assert [s["size"] for s in payload["stages"]] == [1, 2, 3, 4, 5]


def test_solve_csv_columns(tmp_path):
    path = tmp_path / "stages.csv"
    assert main(["solve", "D = lift(D)", "--depth", "2", "--csv", str(path)]) == 0
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["n", "size", "canonical_form", "defect"]
    assert len(rows) == 4  # header + stages 0..2


def test_solve_syntax_error_exit_2(capsys):
    assert main(["solve", "D = lift("]) == 2
    assert "syntax error" in capsys.readouterr().err


def test_solve_env_cap_override(monkeypatch, capsys):
    monkeypatch.setenv("EPSOLVE_CAP_ELEMS", "3")
    assert main(["solve", "D = lift(D)", "--depth", "5"]) == 2
    assert "cap exceeded" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# check-ld

def test_check_ld_counterexample_exit_1(counterexample_path, capsys):
    assert main(["check-ld", "--cocone", counterexample_path]) == 1
    out = capsys.readouterr().out
    assert "verdict: False" in out
    assert "defects: [1, 1, 1]" in out


def test_check_ld_canonical_exit_0(canonical_path, capsys):
    assert main(["check-ld", "--cocone", canonical_path]) == 0
    assert "verdict: True" in capsys.readouterr().out


def test_check_ld_missing_file_exit_2(tmp_path, capsys):
    assert main(["check-ld", "--cocone", str(tmp_path / "absent.json")]) == 2


def test_check_ld_json_report(counterexample_path, tmp_path):
    out = tmp_path / "report.json"
    main(["check-ld", "--cocone", counterexample_path, "--json", str(out)])
    payload = json.loads(out.read_text())
    assert payload["verdict"] is False


# ---------------------------------------------------------------------------
# preserve

def test_preserve_lift_on_canonical_exit_0(canonical_path, capsys):
    assert main(["preserve", "lift(D)", "--cocone", canonical_path]) == 0
    out = capsys.readouterr().out
    assert "colimiting: True" in out
    assert "locally determined: True" in out


def test_preserve_identity_on_counterexample_exit_1(counterexample_path):
    assert main(["preserve", "D", "--cocone", counterexample_path]) == 1


def test_preserve_syntax_error_exit_2(counterexample_path):
    assert main(["preserve", "lift(", "--cocone", counterexample_path]) == 2


# ---------------------------------------------------------------------------
# verify-theorems and yoneda-demo

def test_verify_theorems_small_run(tmp_path, capsys):
    out = tmp_path / "suite.json"
    code = main(
        ["verify-theorems", "--chains", "5", "--lub-cases", "5", "--json", str(out)]
    )
    assert code == 0
    stdout = capsys.readouterr().out
    for name in ("P1", "P2", "P3", "P4a", "P4b", "P4c", "P5", "P6", "P7"):
        assert f"{name}: PASS" in stdout
    payload = json.loads(out.read_text())
    assert all(r["passed"] for r in payload["results"])


def test_yoneda_demo(capsys):
    assert main(["yoneda-demo"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["fully_faithful"] is True
