"""Command-line interface: commands, outputs, warnings, exit codes."""

import json
import subprocess
import sys

import numpy as np
import pytest

from reachwarp import SampleVerdict, load_config

E_INV = float(np.exp(-1.0))


def read_json(path):
    return json.loads(path.read_text(encoding="utf-8"))


def stdout_value(out: str, key: str) -> float:
    for line in out.splitlines():
        if line.startswith(f"{key} = "):
            return float(line.split("=", 1)[1])
    raise AssertionError(f"no '{key}' line in output: {out!r}")


def test_fixtures_listing(run_cli):
    code, out, _ = run_cli("fixtures")
    assert code == 0
    for name in ("admire_grow_p", "admire_shrink_p", "admire_mixed_d",
                 "oscillator", "scalar_analytic", "diag3_theorem"):
        assert name in out


def test_fixtures_emit_round_trip(run_cli, tmp_path):
    code, out, _ = run_cli("fixtures", "--emit", "scalar_analytic", "--out", tmp_path)
    assert code == 0
    path = tmp_path / "scalar_analytic.json"
    assert str(path) in out
    cfg = load_config(path)
    assert cfg.system.n == 1
    assert cfg.sense == "grow"


def test_fixtures_emit_unknown_name(run_cli, tmp_path):
    code, _, err = run_cli("fixtures", "--emit", "nope", "--out", tmp_path)
    assert code == 2
    assert "nope" in err


def test_optimize_scalar_outputs(run_cli, fixture_file, tmp_path):
    cfg = fixture_file("scalar_analytic")
    out_dir = tmp_path / "run"
    code, out, err = run_cli("optimize", "--config", cfg, "--out", out_dir)
    assert code == 0
    assert "THEOREM REGIME" not in err
    assert abs(stdout_value(out, "G_nominal") - (1.0 - E_INV)) <= 1e-9
    assert abs(stdout_value(out, "G_optimized") - 1.5 * (1.0 - E_INV)) <= 1e-9
    result = read_json(out_dir / "warp_result.json")
    assert result["sense"] == "grow"
    assert result["regime"] == "theorem"
    assert result["i_star"] == 1
    assert result["steps"] == 2000
    assert abs(result["B_star"][0][0] - 1.5) <= 1e-12
    assert len(result["candidates"]) == 2
    assert result["assumptions"]["all_real"] is True
    assert result["degenerate"] is False
    manifest = read_json(out_dir / "manifest.json")
    assert manifest["command"] == "optimize"
    assert manifest["outputs"] == ["warp_result.json"]
    assert manifest["regime"] == "theorem"
    assert manifest["config"] == read_json(cfg)
    assert manifest["wall_clock_s"] >= 0.0


def test_optimize_warns_outside_theorem_regime(run_cli, fixture_file, tmp_path):
    code, _, err = run_cli("optimize", "--config", fixture_file("admire_grow_p"),
                           "--out", tmp_path / "a")
    assert code == 0
    assert "THEOREM REGIME NOT SATISFIED" in err
    assert "not an eigenvector" in err
    code, _, err = run_cli("optimize", "--config", fixture_file("oscillator"),
                           "--out", tmp_path / "b")
    assert code == 0
    assert "complex eigenvalues" in err


def test_warns_when_zero_input_not_admissible(run_cli, tmp_path):
    doc = {
        "A": [[-1.0]], "X0": [0.0], "T": 1.0,
        "control": {"type": "box", "lo": [0.5], "hi": [1.0]},
        "admissible": {"type": "frobenius_ball", "center": [[1.0]], "radius": 0.1},
        "direction": [1.0],
    }
    cfg = tmp_path / "no_zero.json"
    cfg.write_text(json.dumps(doc), encoding="utf-8")
    code, _, err = run_cli("metric", "--config", cfg, "--out", tmp_path / "m")
    assert code == 0
    assert "does not contain the zero input" in err


def test_metric_nominal_and_optimized(run_cli, fixture_file, tmp_path):
    cfg = fixture_file("scalar_analytic")
    code, out, _ = run_cli("metric", "--config", cfg, "--out", tmp_path / "n")
    assert code == 0
    assert abs(stdout_value(out, "G_d") - (1.0 - E_INV)) <= 1e-6
    payload = read_json(tmp_path / "n" / "metric.json")
    assert payload["B_source"] == "nominal"
    assert payload["steps"] == 2000
    assert abs(payload["G_d"] - (1.0 - E_INV)) <= 1e-6
    code, out, _ = run_cli("metric", "--config", cfg, "--B", "optimized",
                           "--out", tmp_path / "o")
    assert code == 0
    assert abs(stdout_value(out, "G_d") - 1.5 * (1.0 - E_INV)) <= 1e-6
    assert read_json(tmp_path / "o" / "metric.json")["B_source"] == "optimized"


def test_metric_with_matrix_file(run_cli, fixture_file, tmp_path):
    cfg = fixture_file("scalar_analytic")
    bare = tmp_path / "zero.json"
    bare.write_text("[[0.0]]", encoding="utf-8")
    code, out, _ = run_cli("metric", "--config", cfg, "--B", bare,
                           "--out", tmp_path / "z")
    assert code == 0
    assert abs(stdout_value(out, "G_d")) <= 1e-12
    assert read_json(tmp_path / "z" / "metric.json")["B_source"] == "custom"
    wrapped = tmp_path / "wrapped.json"
    wrapped.write_text(json.dumps({"B": [[2.0]]}), encoding="utf-8")
    code, out, _ = run_cli("metric", "--config", cfg, "--B", wrapped,
                           "--out", tmp_path / "w")
    assert code == 0
    assert abs(stdout_value(out, "G_d") - 2.0 * (1.0 - E_INV)) <= 1e-6


def test_metric_rejects_bad_matrix_file(run_cli, fixture_file, tmp_path):
    cfg = fixture_file("scalar_analytic")
    bad_shape = tmp_path / "bad.json"
    bad_shape.write_text("[[1.0, 2.0]]", encoding="utf-8")
    code, _, err = run_cli("metric", "--config", cfg, "--B", bad_shape,
                           "--out", tmp_path / "x")
    assert code == 2
    assert "expected shape" in err
    code, _, err = run_cli("metric", "--config", cfg, "--B", tmp_path / "none.json",
                           "--out", tmp_path / "y")
    assert code == 2
    not_json = tmp_path / "text.json"
    not_json.write_text("hello", encoding="utf-8")
    code, _, err = run_cli("metric", "--config", cfg, "--B", not_json,
                           "--out", tmp_path / "v")
    assert code == 2


def test_boundary_nominal_csv(run_cli, fixture_file, tmp_path):
    out_dir = tmp_path / "sweep"
    code, _, _ = run_cli("boundary", "--config", fixture_file("oscillator"),
                         "--out", out_dir)
    assert code == 0
    lines = (out_dir / "boundary_nominal.csv").read_text().strip().splitlines()
    assert lines[0] == "dir_index,d_1,d_2,x_1,x_2,support_value"
    assert len(lines) == 65
    for line in lines[1:]:
        cells = line.split(",")
        assert len(cells) == 6
        assert int(cells[0]) >= 0
        assert all(np.isfinite(float(c)) for c in cells[1:])
    manifest = read_json(out_dir / "manifest.json")
    assert manifest["extras"]["directions_total"] == 64
    assert manifest["extras"]["steps"] == 2000
    assert "directions_grown" not in manifest["extras"]


def test_boundary_optimized_counts_grown_directions(run_cli, fixture_file, tmp_path):
    out_dir = tmp_path / "opt"
    code, _, _ = run_cli("boundary", "--config", fixture_file("oscillator"),
                         "--B", "optimized", "--directions", "16", "--out", out_dir)
    assert code == 0
    lines = (out_dir / "boundary_optimized.csv").read_text().strip().splitlines()
    assert len(lines) == 17
    manifest = read_json(out_dir / "manifest.json")
    assert manifest["extras"]["directions_total"] == 16
    assert 0 <= manifest["extras"]["directions_grown"] <= 16


def test_boundary_direction_and_seed_overrides(run_cli, fixture_file, tmp_path):
    out_dir = tmp_path / "few"
    code, _, _ = run_cli("boundary", "--config", fixture_file("admire_grow_p"),
                         "--directions", "10", "--seed", "7", "--out", out_dir)
    assert code == 0
    lines = (out_dir / "boundary_nominal.csv").read_text().strip().splitlines()
    assert len(lines) == 11
    manifest = read_json(out_dir / "manifest.json")
    assert manifest["extras"]["directions_total"] == 10
    assert manifest["extras"]["seed"] == 7


def test_verify_scalar_passes(run_cli, fixture_file, tmp_path):
    out_dir = tmp_path / "v"
    code, out, _ = run_cli("verify", "--config", fixture_file("scalar_analytic"),
                           "--samples", "60", "--out", out_dir)
    assert code == 0
    assert "pass" in out
    verdict = read_json(out_dir / "verdict.json")
    assert verdict["pass"] is True
    assert verdict["pass_required"] is True
    assert verdict["samples"] == 60
    assert verdict["margin"] >= -1e-9


def test_verify_heuristic_regime_not_required(run_cli, fixture_file, tmp_path):
    out_dir = tmp_path / "vh"
    code, out, _ = run_cli("verify", "--config", fixture_file("oscillator"),
                           "--samples", "40", "--out", out_dir)
    assert code == 0
    assert "not-required" in out
    verdict = read_json(out_dir / "verdict.json")
    assert verdict["pass_required"] is False
    assert verdict["regime"] == "heuristic-complex"


def test_verify_failure_in_theorem_regime_exits_one(run_cli, fixture_file,
                                                    tmp_path, monkeypatch):
    def fake_verify(*args, **kwargs):
        return SampleVerdict(samples=5, best_sampled_G=1.0,
                             best_sampled_B=np.zeros((3, 2)), G_star=0.5,
                             margin=-0.5, passed=False, tol_verify=1e-6)

    monkeypatch.setattr("reachwarp.cli.verify_optimality", fake_verify)
    out_dir = tmp_path / "vf"
    code, out, _ = run_cli("verify", "--config", fixture_file("diag3_theorem"),
                           "--samples", "5", "--out", out_dir)
    assert code == 1
    assert "FAIL" in out
    verdict = read_json(out_dir / "verdict.json")
    assert verdict["pass"] is False
    assert verdict["pass_required"] is True


def test_missing_or_broken_config_exits_two(run_cli, tmp_path):
    code, _, err = run_cli("optimize", "--out", tmp_path)
    assert code == 2
    assert "--config is required" in err
    code, _, err = run_cli("optimize", "--config", tmp_path / "absent.json",
                           "--out", tmp_path)
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"A": [[-1.0]], "X0": [0.0], "T": 1.0,
                               "mystery": True}), encoding="utf-8")
    code, _, err = run_cli("optimize", "--config", bad, "--out", tmp_path)
    assert code == 2
    assert "mystery" in err


def test_numeric_overflow_exits_three(run_cli, tmp_path):
    doc = {
        "A": [[50.0]], "X0": [0.0], "T": 20.0,
        "control": {"type": "box", "lo": [-1.0], "hi": [1.0]},
        "admissible": {"type": "frobenius_ball", "center": [[1.0]], "radius": 0.1},
        "direction": [1.0], "steps": 200,
    }
    cfg = tmp_path / "explosive.json"
    cfg.write_text(json.dumps(doc), encoding="utf-8")
    with np.errstate(over="ignore", invalid="ignore"):
        code, _, err = run_cli("metric", "--config", cfg, "--out", tmp_path / "e")
    assert code == 3
    assert "numerical failure" in err


def test_steps_override_recorded(run_cli, fixture_file, tmp_path):
    out_dir = tmp_path / "s"
    code, _, _ = run_cli("metric", "--config", fixture_file("scalar_analytic"),
                         "--steps", "500", "--out", out_dir)
    assert code == 0
    assert read_json(out_dir / "metric.json")["steps"] == 500


def test_repeat_runs_byte_identical(run_cli, fixture_file, tmp_path):
    cfg = fixture_file("oscillator")
    for d in ("r1", "r2"):
        code, _, _ = run_cli("metric", "--config", cfg, "--out", tmp_path / d)
        assert code == 0
    first = (tmp_path / "r1" / "metric.json").read_bytes()
    second = (tmp_path / "r2" / "metric.json").read_bytes()
    assert first == second


def test_module_entry_point_exit_codes():
    done = subprocess.run([sys.executable, "-m", "reachwarp", "fixtures"],
                          capture_output=True, text=True)
    assert done.returncode == 0
    assert "scalar_analytic" in done.stdout
    failed = subprocess.run([sys.executable, "-m", "reachwarp", "optimize",
                             "--config", "does_not_exist.json"],
                            capture_output=True, text=True)
    assert failed.returncode == 2
