"""CLI: config validation, stable file schemas, exit codes, resume semantics."""

import csv
import json
import math
import os

import numpy as np
import pytest

from filamentmc.cli import main

GOLDEN_THERMO_HEADER = (
    "beta_scaled,temperature,r_squared,free_energy,enthalpy,entropy,specific_heat,status"
)
GOLDEN_THERMO_ROW = (
    "1,1,0.84307033081725358,1.4788168854490928,0.29267622381458558,"
    "-1.1861406616345072,-0.20648058601107555,ok"
)


def write_config(path, doc):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
    return str(path)


def thermo_config(tmp_path, **sweep_overrides):
    sweep = {"variable": "beta_scaled", "min": 1.0, "max": 1.0, "count": 1, "spacing": "linear"}
    sweep.update(sweep_overrides)
    return write_config(
        tmp_path / "thermo.json",
        {
            "schema_version": 1,
            "mode": "thermo",
            "seed": 1,
            "output_format": "csv",
            "thermo": {"alpha_scaled": 1.0, "pressure_scaled": 1.0, "sweep": sweep},
        },
    )


def simulate_config(tmp_path, name="sim.json", **overrides):
    doc = {
        "schema_version": 1,
        "mode": "simulate",
        "seed": 9,
        "output_format": "csv",
        "simulate": {
            "scaled_params": {"alpha_scaled": 1.0, "pressure_scaled": 1.0, "beta_scaled": 1.0},
            "n_filaments": 6,
            "n_segments": 4,
            "hamiltonian_kind": "mean-field",
            "burn_in_sweeps": 100,
            "measurement_sweeps": 400,
            "thinning": 5,
        },
    }
    for key, value in overrides.items():
        if key in ("schema_version", "mode", "seed", "output_format"):
            doc[key] = value
        else:
            doc["simulate"][key] = value
    return write_config(tmp_path / name, doc)


class TestThermoCommand:
    def test_golden_csv(self, tmp_path, capsys):
        cfg = thermo_config(tmp_path)
        out = tmp_path / "table.csv"
        assert main(["thermo", "--config", cfg, "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == GOLDEN_THERMO_HEADER
        assert lines[1] == GOLDEN_THERMO_ROW

    def test_unreachable_enthalpy_rows_flagged(self, tmp_path):
        cfg = write_config(
            tmp_path / "h.json",
            {
                "schema_version": 1,
                "mode": "thermo",
                "output_format": "csv",
                "thermo": {
                    "alpha_scaled": 1.0,
                    "pressure_scaled": 1.0,
                    "sweep": {
                        "variable": "enthalpy_per_filament",
                        "min": 0.25,
                        "max": 0.60,
                        "count": 8,
                        "spacing": "linear",
                    },
                },
            },
        )
        out = tmp_path / "h.csv"
        assert main(["thermo", "--config", cfg, "--out", str(out)]) == 0
        with open(out, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 8
        flagged = [r for r in rows if r["status"] != "ok"]
        assert len(flagged) == 1  # only the 0.60 endpoint exceeds H_sup ~ 0.5966
        assert "unreachable-enthalpy" in flagged[0]["status"]
        assert "0.596574" in flagged[0]["status"]
        assert flagged[0]["beta_scaled"] == ""
        assert float(flagged[0]["enthalpy"]) == pytest.approx(0.60)
        # ok rows solved the inversion
        assert all(float(r["beta_scaled"]) > 0 for r in rows if r["status"] == "ok")

    def test_specific_heat_column_negative(self, tmp_path):
        cfg = thermo_config(tmp_path, min=0.1, max=10.0, count=25, spacing="log")
        out = tmp_path / "sweep.csv"
        assert main(["thermo", "--config", cfg, "--out", str(out)]) == 0
        with open(out, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 25
        assert all(float(r["specific_heat"]) < 0 for r in rows)

    def test_json_lines_format(self, tmp_path):
        cfg = write_config(
            tmp_path / "jl.json",
            {
                "schema_version": 1,
                "mode": "thermo",
                "output_format": "json-lines",
                "thermo": {
                    "alpha_scaled": 1.0,
                    "pressure_scaled": 1.0,
                    "sweep": {"variable": "beta_scaled", "min": 0.5, "max": 2.0, "count": 4},
                },
            },
        )
        out = tmp_path / "rows.jsonl"
        assert main(["thermo", "--config", cfg, "--out", str(out)]) == 0
        rows = [json.loads(line) for line in out.read_text().splitlines()]
        assert len(rows) == 4
        assert rows[0]["status"] == "ok"
        assert rows[0]["specific_heat"] < 0


class TestConfigValidation:
    def test_bad_schema_version(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "bad.json", {"schema_version": 99, "mode": "thermo"})
        assert main(["thermo", "--config", cfg]) == 2
        assert "schema_version" in capsys.readouterr().err

    def test_bad_mode(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "bad.json", {"schema_version": 1, "mode": "explode"})
        assert main(["thermo", "--config", cfg]) == 2
        assert "mode" in capsys.readouterr().err

    def test_mode_command_mismatch(self, tmp_path, capsys):
        cfg = thermo_config(tmp_path)
        assert main(["simulate", "--config", cfg]) == 2

    def test_sweep_bounds_named_in_error(self, tmp_path, capsys):
        cfg = thermo_config(tmp_path, min=2.0, max=1.0, count=5)
        assert main(["thermo", "--config", cfg]) == 2
        assert "min" in capsys.readouterr().err

    def test_missing_field_named(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path / "missing.json",
            {"schema_version": 1, "mode": "thermo", "thermo": {"alpha_scaled": 1.0}},
        )
        assert main(["thermo", "--config", cfg]) == 2
        err = capsys.readouterr().err
        assert "pressure_scaled" in err or "sweep" in err

    def test_config_file_not_found(self, tmp_path, capsys):
        assert main(["thermo", "--config", str(tmp_path / "nope.json")]) == 2


class TestVerifyCommand:
    def test_fast_suite_passes(self, tmp_path, capsys):
        out = tmp_path / "reports.jsonl"
        rc = main(["verify", "--suite", "rsq-argmin", "--seed", "5", "--out", str(out)])
        captured = capsys.readouterr().out
        assert rc == 0
        assert "PASS" in captured and "FAIL" not in captured
        reports = [json.loads(line) for line in out.read_text().splitlines()]
        assert len(reports) == 50
        assert all(r["passed"] for r in reports)

    def test_corrupted_tolerance_fails(self, capsys):
        rc = main(["verify", "--suite", "rsq-argmin", "--seed", "5",
                   "--tolerance-scale", "1e-12"])
        assert rc == 1
        assert "FAIL" in capsys.readouterr().out

    def test_unknown_suite_is_usage_error(self, capsys):
        rc = main(["verify", "--suite", "nonsense"])
        assert rc == 2
        err = capsys.readouterr().err
        for name in ("rsq-argmin", "disk-log", "derivatives", "appendix-limit"):
            assert name in err

    def test_appendix_limit_suite(self, capsys):
        assert main(["verify", "--suite", "appendix-limit", "--seed", "3"]) == 0


class TestSimulateCommand:
    def test_smoke_and_summary(self, tmp_path):
        cfg = simulate_config(tmp_path)
        out = tmp_path / "run"
        assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
        obs = out / "observables.csv"
        summary = json.loads((out / "summary.json").read_text())
        ckpt = json.loads((out / "checkpoint.json").read_text())
        with open(obs, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 400 // 5
        assert summary["records"] == 80
        comparison = summary["radius_comparison"]
        for key in (
            "predicted_r_squared",
            "measured_momentum_per_filament",
            "std_error",
            "sigma_distance",
            "relative_gap",
        ):
            assert key in comparison
        assert float(comparison["predicted_r_squared"]) == pytest.approx(
            0.8430703308172536
        )
        assert ckpt["sweeps"]["measurement_done"] == 400

    def test_collision_refused_without_overwrite(self, tmp_path, capsys):
        cfg = simulate_config(tmp_path)
        out = tmp_path / "run"
        assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
        assert main(["simulate", "--config", cfg, "--out", str(out)]) == 2
        assert "--overwrite" in capsys.readouterr().err
        assert main(["simulate", "--config", cfg, "--out", str(out), "--overwrite"]) == 0

    def test_determinism_across_directories(self, tmp_path):
        cfg = simulate_config(tmp_path)
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert main(["simulate", "--config", cfg, "--out", str(out_a)]) == 0
        assert main(["simulate", "--config", cfg, "--out", str(out_b)]) == 0
        assert (out_a / "observables.csv").read_text() == (out_b / "observables.csv").read_text()
        assert (out_a / "checkpoint.json").read_text() == (out_b / "checkpoint.json").read_text()

    def test_seed_override_changes_output(self, tmp_path):
        cfg = simulate_config(tmp_path)
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert main(["simulate", "--config", cfg, "--out", str(out_a)]) == 0
        assert main(["simulate", "--config", cfg, "--out", str(out_b), "--seed", "77"]) == 0
        assert (out_a / "observables.csv").read_text() != (out_b / "observables.csv").read_text()

    def test_resume_reproduces_uninterrupted_run(self, tmp_path):
        half_cfg = simulate_config(tmp_path, name="half.json", measurement_sweeps=200)
        full_cfg = simulate_config(tmp_path, name="full.json", measurement_sweeps=400)
        resumed_dir = tmp_path / "resumed"
        full_dir = tmp_path / "full"
        assert main(["simulate", "--config", half_cfg, "--out", str(resumed_dir)]) == 0
        assert main(
            [
                "simulate",
                "--config",
                full_cfg,
                "--out",
                str(resumed_dir),
                "--resume",
                str(resumed_dir / "checkpoint.json"),
            ]
        ) == 0
        assert main(["simulate", "--config", full_cfg, "--out", str(full_dir)]) == 0
        assert (resumed_dir / "observables.csv").read_text() == (
            full_dir / "observables.csv"
        ).read_text()
        assert (resumed_dir / "summary.json").read_text() == (
            full_dir / "summary.json"
        ).read_text()

    def test_env_var_default_output_dir(self, tmp_path, monkeypatch):
        cfg = simulate_config(tmp_path)
        target = tmp_path / "from-env"
        monkeypatch.setenv("FILAMENTMC_OUT_DIR", str(target))
        assert main(["simulate", "--config", cfg]) == 0
        assert (target / "observables.csv").exists()

    def test_no_output_dir_is_usage_error(self, tmp_path, monkeypatch, capsys):
        monkeypatch.delenv("FILAMENTMC_OUT_DIR", raising=False)
        cfg = simulate_config(tmp_path)
        assert main(["simulate", "--config", cfg]) == 2
        assert "FILAMENTMC_OUT_DIR" in capsys.readouterr().err

    def test_json_lines_observables(self, tmp_path):
        cfg = simulate_config(tmp_path, output_format="json-lines")
        out = tmp_path / "run"
        assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
        lines = (out / "observables.jsonl").read_text().splitlines()
        assert len(lines) == 80
        record = json.loads(lines[0])
        assert set(record) == {
            "sweep",
            "enthalpy",
            "self_energy",
            "interaction_energy",
            "momentum_per_filament",
        }
