from __future__ import annotations

import json
import subprocess
import sys
from importlib import resources

import pytest

from ccgtuc.harness.cli import EXIT_ERROR, EXIT_INVALID, EXIT_OK, main
from ccgtuc.harness.fixtures import one_by_one_plant
from ccgtuc.harness.instance import SystemInstance, instance_to_dict

BUNDLED = str(resources.files("ccgtuc").joinpath("data/two_by_one.json"))


@pytest.fixture
def small_instance(tmp_path):
    inst = SystemInstance(4, (100.0, 150.0, 200.0, 120.0), (one_by_one_plant(),), value_of_lost_load=500.0, name="small")
    path = tmp_path / "small.json"
    path.write_text(json.dumps(instance_to_dict(inst)))
    return str(path)


def test_validate_ok(capsys):
    assert main(["validate", "--instance", BUNDLED]) == EXIT_OK
    assert "1 plant(s), 1 unit(s), T=12" in capsys.readouterr().out


def test_validate_bad_instance(tmp_path, capsys):
    doc = json.loads(open(BUNDLED).read())
    doc["demand"] = doc["demand"][:3]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    assert main(["validate", "--instance", str(path)]) == EXIT_INVALID
    assert "/demand" in capsys.readouterr().err


def test_missing_file():
    assert main(["validate", "--instance", "/nonexistent.json"]) == EXIT_ERROR


def test_build_writes_mps(tmp_path, small_instance):
    out = tmp_path / "m.mps"
    assert main(["build", "--instance", small_instance, "--variant", "f2", "--out", str(out)]) == EXIT_OK
    text = out.read_text()
    assert text.startswith("NAME small_F2 FREE") and text.endswith("ENDATA\n")


def test_unknown_variant_is_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["build", "--instance", BUNDLED, "--variant", "F9"])
    assert info.value.code == 2


def test_solve_then_validate_schedule(tmp_path, small_instance, capsys):
    out = tmp_path / "sol.json"
    assert main(["solve", "--instance", small_instance, "--gap", "1e-9", "--out", str(out)]) == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["status"] == "optimal" and doc["violations"] == []
    assert doc["lp_objective"] <= doc["objective"] + 1e-6
    assert main(["validate", "--instance", small_instance, "--schedule", str(out)]) == EXIT_OK
    assert "schedule ok" in capsys.readouterr().out

    # break the schedule: switch straight from CT+ST to off
    doc["schedules"]["plants"][0]["config_path"][0] = "off"
    doc["schedules"]["plants"][0]["output"][0] = 0.0
    doc["schedules"]["plants"][0]["config_path"][1] = "CT+ST"
    out.write_text(json.dumps(doc))
    assert main(["validate", "--instance", small_instance, "--schedule", str(out)]) == EXIT_INVALID


def test_oracle_agrees_with_solve(tmp_path, small_instance):
    sol, orc = tmp_path / "s.json", tmp_path / "o.json"
    assert main(["solve", "--instance", small_instance, "--gap", "1e-9", "--out", str(sol)]) == EXIT_OK
    assert main(["oracle", "--instance", small_instance, "--out", str(orc)]) == EXIT_OK
    assert json.loads(orc.read_text())["cost"] == pytest.approx(json.loads(sol.read_text())["objective"], rel=1e-9)


def test_oracle_refuses_units_and_large_instances(capsys):
    # the bundled instance has a regular unit
    assert main(["oracle", "--instance", BUNDLED]) == EXIT_ERROR
    assert "exactly one plant" in capsys.readouterr().err


def test_oracle_guard(tmp_path, capsys):
    doc = json.loads(open(BUNDLED).read())
    doc["units"] = []
    path = tmp_path / "big.json"
    path.write_text(json.dumps(doc))
    assert main(["oracle", "--instance", str(path)]) == EXIT_ERROR
    assert "limit" in capsys.readouterr().err


def test_solver_failure_exit_code(small_instance):
    assert main(["solve", "--instance", small_instance, "--solver-cmd", "false {model} {solution}"]) == EXIT_ERROR


def test_compare_and_report(tmp_path, small_instance, capsys):
    rows = tmp_path / "rows.json"
    assert main(["compare", "--instance", small_instance, "--gap", "1e-9", "--json", str(rows), "--jobs", "2"]) == EXIT_OK
    captured = capsys.readouterr()
    assert captured.out.splitlines()[0] == "Model,Obj,Saving,Gap,Time,R,Nodes,Igap"
    assert "F5 is identical to F1" in captured.err
    assert main(["report", "--input", str(rows), "--format", "text"]) == EXIT_OK
    text = capsys.readouterr().out
    assert text.splitlines()[0].split() == ["Model", "Obj", "Saving", "Gap", "Time", "R", "Nodes", "Igap"]
    assert main(["report", "--input", str(tmp_path / "missing.json")]) == EXIT_ERROR


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ccgtuc.harness.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "compare" in proc.stdout
