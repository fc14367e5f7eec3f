import csv
import io
from dataclasses import replace

import pytest

from omegaint import cli
from omegaint.fuzz import COLUMNS


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("sub", ["integrality", "discriminant", "branches", "counting", "verify-main",
                                 "verify-dosvar", "verify-quad", "verify-campana"])
def test_quad_subcommands_ok(sub):
    code, out, err = run(sub, "--input", "quad.scn")
    assert code == 0, err
    assert out


@pytest.mark.parametrize("sub", ["integrality", "counting", "verify-main", "verify-dosvar", "verify-nw"])
def test_wronskian_subcommands_ok(sub):
    code, out, err = run(sub, "--input", "wronskian.scn")
    assert code == 0, err


def test_missing_check_kind_is_scenario_error():
    code, _, err = run("verify-nw", "--input", "quad.scn")
    assert code == 3 and "no nw checks" in err


def test_discriminant_output():
    code, out, _ = run("discriminant", "--input", "quad.scn")
    assert "Delta = Y^2 - 4*X*Z" in out
    code, out, _ = run("discriminant", "--input", "quad.scn", "--format", "csv")
    assert out.splitlines()[0] == "form,chart,polynomial"


def test_verify_quad_exceptional_note():
    code, out, _ = run("verify-quad", "--input", "quad.scn")
    assert code == 0
    assert "EXCEPTIONAL" in out and "would-be inequality 51/2 < 17 is false" in out
    assert "Y^2 - 4*X*Z = 0" in out


def test_scenario_errors(tmp_path):
    bad = tmp_path / "bad.scn"
    bad.write_text('form f { order = 1  chart = "UX"  expr = "d1(u)*X^+2" }\n')
    code, _, err = run("discriminant", "--input", str(bad))
    assert code == 3 and err.startswith(f"{bad}:1:")
    code, _, err = run("discriminant", "--input", str(tmp_path / "missing.scn"))
    assert code == 3 and "cannot read" in err
    bad.write_text("map m { coords = [\"s\", \"t\"] }\ncheck c { type = \"main\"  map = nowhere }\n")
    code, _, err = run("verify-main", "--input", str(bad))
    assert code == 3 and ":2:" in err


def test_usage_error_is_not_violation():
    with pytest.raises(SystemExit) as info:
        run("fuzz", "--input", "quad.scn", "--trials", "-1")
    assert info.value.code == 3


def test_fuzz_csv_and_out(tmp_path):
    target = tmp_path / "f.csv"
    code, out, _ = run("fuzz", "--input", "wronskian.scn", "--trials", "9", "--seed", "5",
                       "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    rows = list(csv.reader(io.StringIO(target.read_text())))
    assert tuple(rows[0]) == COLUMNS and len(rows) == 10
    code, again, _ = run("fuzz", "--input", "wronskian.scn", "--trials", "9", "--seed", "5", "--format", "csv")
    assert again.encode() == target.read_bytes()
    code, out, _ = run("fuzz", "--input", "quad.scn", "--trials", "0", "--format", "csv")
    assert code == 0 and out.splitlines() == [",".join(COLUMNS)]


def test_violation_exit_code(monkeypatch):
    from omegaint import runner
    real = runner.main_inequality_report

    def broken(*a, **kw):
        return replace(real(*a, **kw), verdict="VIOLATION")

    monkeypatch.setattr(runner, "main_inequality_report", broken)
    code, out, _ = run("verify-main", "--input", "quad.scn", "--format", "csv")
    assert code == 2 and "VIOLATION" in out
