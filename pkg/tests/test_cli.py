import csv
import json
import os
from pathlib import Path

import pytest

from artifact.cli import EXIT_IO, EXIT_OK, EXIT_TOLERANCE, EXIT_VALIDATION, run

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def _write(tmp_path, text, name="run.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


@pytest.mark.parametrize("command, config", [
    ("decompose", "chi5_decompose.ini"),
    ("volterra", "chi5_decompose.ini"),
    ("whittaker", "whittaker.ini"),
    ("zero-identity", "zero_identity.ini"),
    ("fe-check", "gaussian.ini"),
    ("mellin", "mellin.ini"),
    ("perron", "perron.ini"),
])
def test_shipped_configs_pass(command, config, tmp_path):
    out = tmp_path / "out.csv"
    assert run([command, "--config", str(CONFIGS / config), "--out", str(out)]) == EXIT_OK
    summary = json.loads(out.with_suffix(".summary.json").read_text())
    assert summary["passed"] and summary["max_residual"] <= summary["tolerance"]


def test_riesz_and_continuation(tmp_path):
    cfg = _write(tmp_path, "[grid]\npoints = 1, 20, 137.5\n[continuation]\nz = 0.5+1i\n")
    assert run(["riesz", "--config", cfg, "--out", str(tmp_path / "r.csv")]) == EXIT_OK
    cfg = _write(tmp_path, "[spec]\nname = gaussian\n[continuation]\nz = 0.5+1i\n", "g.ini")
    assert run(["continuation", "--config", cfg, "--out", str(tmp_path / "c.csv")]) == EXIT_OK


def test_csv_layout(tmp_path):
    out = tmp_path / "p.csv"
    run(["perron", "--config", str(CONFIGS / "perron.ini"), "--out", str(out)])
    raw = out.read_bytes()
    assert raw.count(b"\r\n") == 4
    rows = list(csv.reader(raw.decode().splitlines()))
    assert rows[0] == ["a", "c", "T", "value", "limit", "residual", "error_estimate"]
    value = rows[2][3]
    assert float(value) == pytest.approx(0.5, abs=1e-3)
    assert value == format(float(value), ".17g")


def test_json_output(tmp_path):
    out = tmp_path / "p.json"
    assert run(["perron", "--config", str(CONFIGS / "perron.ini"), "--out", str(out), "--format", "json"]) == EXIT_OK
    body = json.loads(out.read_text())
    assert body["summary"]["command"] == "perron" and len(body["rows"]) == 3
    assert body["columns"][0] == "a"


@pytest.mark.parametrize("command, fmt", [("whittaker", "csv"), ("decompose", "json"), ("zero-identity", "csv")])
def test_output_independent_of_thread_count(command, fmt, tmp_path):
    cfg = _write(tmp_path, "[grid]\ncount = 40\nlo = 1\nhi = 5000\nseed = 9\n[zero_identity]\nz = 1+2i\n")
    outs = []
    for threads in (1, 4):
        out = tmp_path / f"t{threads}.{fmt}"
        run([command, "--config", cfg, "--out", str(out), "--format", fmt, "--threads", str(threads)])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_empty_grid_is_a_validation_error(tmp_path, capsys):
    cfg = _write(tmp_path, "[grid]\ncount = 0\n")
    assert run(["decompose", "--config", cfg]) == EXIT_VALIDATION
    assert "grid" in capsys.readouterr().err


def test_bad_field_is_a_validation_error(tmp_path, capsys):
    cfg = _write(tmp_path, "[spec]\nname = zeta\n[grid]\npoints = 1, 2\n[decompose]\ntolerance = abc\n")
    assert run(["decompose", "--config", cfg]) == EXIT_VALIDATION
    assert "decompose.tolerance" in capsys.readouterr().err


def test_missing_config_is_an_io_error(tmp_path, monkeypatch):
    monkeypatch.delenv("ARTIFACT_CONFIG_DIR", raising=False)
    assert run(["perron", "--config", str(tmp_path / "absent.ini")]) == EXIT_IO


def test_unwritable_output_is_an_io_error(tmp_path):
    out = tmp_path / "no" / "such" / "dir" / "p.csv"
    assert run(["perron", "--config", str(CONFIGS / "perron.ini"), "--out", str(out)]) == EXIT_IO


def test_tolerance_miss(tmp_path):
    cfg = _write(tmp_path, "[perron]\na = 1\nT = 100\ntolerance = 1e-9\n")
    out = tmp_path / "p.csv"
    assert run(["perron", "--config", cfg, "--out", str(out)]) == EXIT_TOLERANCE
    assert json.loads(out.with_suffix(".summary.json").read_text())["passed"] is False


def test_stdout_mode(tmp_path, capsys):
    cfg = _write(tmp_path, "[perron]\na = 2\n")
    assert run(["perron", "--config", cfg]) == EXIT_OK
    captured = capsys.readouterr()
    assert captured.out.startswith("a,c,T,")
    assert json.loads(captured.err)["n_points"] == 1


def test_bad_thread_count(tmp_path):
    assert run(["perron", "--config", str(CONFIGS / "perron.ini"), "--threads", "0"]) == EXIT_VALIDATION
