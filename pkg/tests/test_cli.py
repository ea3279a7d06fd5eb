import json
from pathlib import Path

import pytest

from cpdyn import __version__
from cpdyn.cli import main

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"
FIG1_LEFT = str(SCENARIO_DIR / "fig1_left.json")


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_validate_ok(capsys):
    assert main(["validate", "--config", FIG1_LEFT]) == 0
    assert "ok:" in capsys.readouterr().out


def test_validate_missing_file_exits_2(tmp_path, capsys):
    code = main(["validate", "--config", str(tmp_path / "missing.json")])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_validate_invalid_config_exits_2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"hamiltonian": {"pauli": "1*ZI"}}))
    assert main(["validate", "--config", str(path)]) == 2
    assert "missing required field" in capsys.readouterr().err


def test_simulate_writes_csv(tmp_path, capsys):
    out = tmp_path / "run.csv"
    code = main(
        ["simulate", "--config", FIG1_LEFT, "--method", "quantum", "--out", str(out)]
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "# schema=1"
    assert "_c" not in lines[1]
    assert "wrote" in capsys.readouterr().out


def test_compare_passes_on_bundled_scenario(tmp_path, capsys):
    report_path = tmp_path / "report.json"
    code = main(
        ["compare", "--config", FIG1_LEFT, "--report", str(report_path)]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "PASS" in out
    report = json.loads(report_path.read_text())
    assert report["passed"] is True
    assert report["fidelity_gap_max"] < 1e-6


def test_compare_unreachable_tolerance_exits_1(capsys):
    code = main(["compare", "--config", FIG1_LEFT, "--tolerance", "1e-18"])
    assert code == 1
    assert "FAIL" in capsys.readouterr().out


def test_numeric_failure_exits_3(tmp_path, capsys):
    import numpy as np

    doc = {
        "name": "blowup",
        "hamiltonian": {"dense": {"real": [[1e200, 0.0], [0.0, -1e200]]}},
        "initial_state": {"real": [1.0, 0.0]},
        "grid": {"t_end": 1.0, "dt": 0.1},
        "observables": ["populations"],
        "quantum_method": "rk4",
    }
    path = tmp_path / "blowup.json"
    path.write_text(json.dumps(doc))
    with np.errstate(invalid="ignore", over="ignore"):
        code = main(
            [
                "simulate",
                "--config",
                str(path),
                "--method",
                "quantum",
                "--out",
                str(tmp_path / "x.csv"),
            ]
        )
    assert code == 3
    assert "numeric failure" in capsys.readouterr().err
