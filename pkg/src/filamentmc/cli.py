"""Command-line entry point: thermodynamic sweeps, simulations, verification.

Configuration is a single JSON document with a schema_version field (schema
in the README).  Machine-readable output carries 17 significant digits for
lossless float round-trip; human tables print 6.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import oracle as oracle_mod
from . import sampler as sampler_mod
from .ensemble import MEAN_FIELD
from .errors import DomainError, FilamentError, UnreachableEnthalpyError, UsageError
from .oracle import OracleReport
from .sampler import (
    ObservableSeries,
    SamplerConfig,
    blocking_analysis,
    sampler_config_to_doc,
    substream,
)
from .thermo import ScaledParams, mean_square_radius, solve_point

SCHEMA_VERSION = 1
OUTPUT_FORMATS = ("csv", "json-lines")
MODES = ("thermo", "simulate", "verify")
SWEEP_VARIABLES = ("beta_scaled", "enthalpy_per_filament")
VERIFY_SUITES = ("rsq-argmin", "disk-log", "derivatives", "appendix-limit")
ENV_OUT_DIR = "FILAMENTMC_OUT_DIR"
DEFAULT_SEED = 20240801

THERMO_COLUMNS = (
    "beta_scaled",
    "temperature",
    "r_squared",
    "free_energy",
    "enthalpy",
    "entropy",
    "specific_heat",
    "status",
)

OBSERVABLE_COLUMNS = (
    "sweep",
    "enthalpy",
    "self_energy",
    "interaction_energy",
    "momentum_per_filament",
)


def _f17(x: float) -> str:
    return format(float(x), ".17g")


def _f6(x) -> str:
    if x is None:
        return ""
    return format(float(x), ".6g")


# -- run configuration -------------------------------------------------------


@dataclass(frozen=True)
class ThermoJob:
    alpha_scaled: float
    pressure_scaled: float
    variable: str
    sweep_min: float
    sweep_max: float
    count: int
    spacing: str  # "linear" | "log"


@dataclass(frozen=True)
class SimulateJob:
    sampler: SamplerConfig
    output_dir: str | None
    resume: str | None
    checkpoint_every: int | None


@dataclass(frozen=True)
class VerifyJob:
    suites: tuple[str, ...]


@dataclass(frozen=True)
class RunConfig:
    mode: str
    seed: int
    output_format: str
    thermo: ThermoJob | None = None
    simulate: SimulateJob | None = None
    verify: VerifyJob | None = None


def _need(doc: dict, key: str, context: str):
    if key not in doc:
        raise UsageError(f"config is missing required field {context}.{key}")
    return doc[key]


def _build_thermo_job(doc: dict) -> ThermoJob:
    sweep = _need(doc, "sweep", "thermo")
    variable = _need(sweep, "variable", "thermo.sweep")
    if variable not in SWEEP_VARIABLES:
        raise UsageError(
            f"thermo.sweep.variable must be one of {SWEEP_VARIABLES}, got {variable!r}"
        )
    job = ThermoJob(
        alpha_scaled=float(_need(doc, "alpha_scaled", "thermo")),
        pressure_scaled=float(_need(doc, "pressure_scaled", "thermo")),
        variable=variable,
        sweep_min=float(_need(sweep, "min", "thermo.sweep")),
        sweep_max=float(_need(sweep, "max", "thermo.sweep")),
        count=int(_need(sweep, "count", "thermo.sweep")),
        spacing=sweep.get("spacing", "linear"),
    )
    if job.alpha_scaled <= 0 or job.pressure_scaled <= 0:
        raise UsageError("thermo.alpha_scaled and thermo.pressure_scaled must be > 0")
    if job.count < 1:
        raise UsageError(f"thermo.sweep.count must be >= 1, got {job.count}")
    if job.count > 1 and not (job.sweep_min < job.sweep_max):
        raise UsageError("thermo.sweep.min must be < max when count > 1")
    if job.spacing not in ("linear", "log"):
        raise UsageError(f"thermo.sweep.spacing must be 'linear' or 'log', got {job.spacing!r}")
    if job.spacing == "log" and job.sweep_min <= 0:
        raise UsageError("log spacing requires thermo.sweep.min > 0")
    if job.variable == "beta_scaled" and job.sweep_min <= 0:
        raise UsageError("beta_scaled sweep values must be > 0")
    return job


def _build_simulate_job(doc: dict, seed: int) -> SimulateJob:
    params_doc = _need(doc, "scaled_params", "simulate")
    try:
        params = ScaledParams(
            alpha_scaled=float(_need(params_doc, "alpha_scaled", "simulate.scaled_params")),
            pressure_scaled=float(
                _need(params_doc, "pressure_scaled", "simulate.scaled_params")
            ),
            beta_scaled=float(_need(params_doc, "beta_scaled", "simulate.scaled_params")),
        )
        moves = doc.get("move_weights", {})
        sampler = SamplerConfig(
            scaled_params=params,
            n_filaments=int(_need(doc, "n_filaments", "simulate")),
            n_segments=int(_need(doc, "n_segments", "simulate")),
            hamiltonian_kind=doc.get("hamiltonian_kind", MEAN_FIELD),
            single_bead_weight=float(moves.get("single_bead", 0.95)),
            filament_translate_weight=float(moves.get("whole_filament_translate", 0.05)),
            bead_step=float(doc.get("bead_step", 0.5)),
            filament_step=float(doc.get("filament_step", 0.5)),
            burn_in_sweeps=int(_need(doc, "burn_in_sweeps", "simulate")),
            measurement_sweeps=int(_need(doc, "measurement_sweeps", "simulate")),
            thinning=int(doc.get("thinning", 10)),
            seed=seed,
            target_acceptance=float(doc.get("target_acceptance", 0.4)),
            adaptation_window=int(doc.get("adaptation_window", 50)),
            resync_every=int(doc.get("resync_every", 1000)),
        )
    except DomainError as exc:
        raise UsageError(f"invalid simulate config: {exc}") from exc
    checkpoint_every = doc.get("checkpoint_every")
    if checkpoint_every is not None:
        checkpoint_every = int(checkpoint_every)
        if checkpoint_every < 1:
            raise UsageError("simulate.checkpoint_every must be >= 1 when set")
    return SimulateJob(
        sampler=sampler,
        output_dir=doc.get("output_dir"),
        resume=doc.get("resume"),
        checkpoint_every=checkpoint_every,
    )


def _build_verify_job(doc: dict) -> VerifyJob:
    suites = tuple(doc.get("suites", ["all"]))
    expanded: list[str] = []
    for name in suites:
        if name == "all":
            expanded.extend(VERIFY_SUITES)
        elif name in VERIFY_SUITES:
            expanded.append(name)
        else:
            raise UsageError(
                f"unknown verify suite {name!r}; valid suites: "
                f"{', '.join(VERIFY_SUITES)} (or 'all')"
            )
    return VerifyJob(suites=tuple(dict.fromkeys(expanded)))


def load_run_config(path, seed_override: int | None = None) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file is not valid JSON: {exc}")
    return run_config_from_doc(doc, seed_override)


def run_config_from_doc(doc: dict, seed_override: int | None = None) -> RunConfig:
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise UsageError(
            f"config schema_version {version!r} is not supported; expected {SCHEMA_VERSION}"
        )
    mode = _need(doc, "mode", "config")
    if mode not in MODES:
        raise UsageError(f"mode must be one of {MODES}, got {mode!r}")
    seed = int(doc.get("seed", DEFAULT_SEED))
    if seed_override is not None:
        seed = seed_override
    if not (0 <= seed < 2**64):
        raise UsageError(f"seed must be a 64-bit unsigned integer, got {seed}")
    output_format = doc.get("output_format", "csv")
    if output_format not in OUTPUT_FORMATS:
        raise UsageError(
            f"output_format must be one of {OUTPUT_FORMATS}, got {output_format!r}"
        )
    kwargs: dict = {}
    if mode == "thermo":
        kwargs["thermo"] = _build_thermo_job(_need(doc, "thermo", "config"))
    elif mode == "simulate":
        kwargs["simulate"] = _build_simulate_job(_need(doc, "simulate", "config"), seed)
    else:
        kwargs["verify"] = _build_verify_job(doc.get("verify", {}))
    return RunConfig(mode=mode, seed=seed, output_format=output_format, **kwargs)


# -- thermo mode --------------------------------------------------------------


def _sweep_grid(job: ThermoJob) -> np.ndarray:
    if job.count == 1:
        return np.array([job.sweep_min])
    if job.spacing == "log":
        return np.logspace(math.log10(job.sweep_min), math.log10(job.sweep_max), job.count)
    return np.linspace(job.sweep_min, job.sweep_max, job.count)


def thermo_rows(job: ThermoJob) -> list[dict]:
    """One row per grid point; unreachable enthalpies become explicit error rows."""
    rows = []
    for value in _sweep_grid(job):
        value = float(value)
        try:
            if job.variable == "beta_scaled":
                params = ScaledParams(
                    job.alpha_scaled, job.pressure_scaled, beta_scaled=value
                )
            else:
                params = ScaledParams(
                    job.alpha_scaled, job.pressure_scaled, enthalpy_per_filament=value
                )
            point = solve_point(params)
            rows.append(
                {
                    "beta_scaled": point.beta_scaled,
                    "temperature": point.temperature,
                    "r_squared": point.r_squared,
                    "free_energy": point.free_energy,
                    "enthalpy": point.enthalpy,
                    "entropy": point.entropy,
                    "specific_heat": point.specific_heat,
                    "status": "ok",
                }
            )
        except UnreachableEnthalpyError as exc:
            rows.append(
                {
                    "beta_scaled": None,
                    "temperature": None,
                    "r_squared": None,
                    "free_energy": None,
                    "enthalpy": value,
                    "entropy": None,
                    "specific_heat": None,
                    "status": (
                        f"unreachable-enthalpy: requested {value:.6g} >= "
                        f"supremum {exc.supremum:.6g}"
                    ),
                }
            )
    return rows


def _write_rows(path: Path, rows: list[dict], columns: tuple[str, ...], fmt: str) -> None:
    if fmt == "csv":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(columns)
            for row in rows:
                writer.writerow(
                    [
                        row[c]
                        if isinstance(row[c], str)
                        else ("" if row[c] is None else _f17(row[c]))
                        for c in columns
                    ]
                )
    else:
        with open(path, "w", encoding="utf-8") as fh:
            for row in rows:
                fh.write(json.dumps({c: row[c] for c in columns}))
                fh.write("\n")


def _print_table(rows: list[dict], columns: tuple[str, ...]) -> None:
    cells = [
        [row[c] if isinstance(row[c], str) else _f6(row[c]) for c in columns]
        for row in rows
    ]
    widths = [
        max(len(col), *(len(line[i]) for line in cells)) if cells else len(col)
        for i, col in enumerate(columns)
    ]
    print("  ".join(col.ljust(w) for col, w in zip(columns, widths)))
    for line in cells:
        print("  ".join(cell.ljust(w) for cell, w in zip(line, widths)))


def cmd_thermo(config: RunConfig, out_path: str | None) -> int:
    rows = thermo_rows(config.thermo)
    _print_table(rows, THERMO_COLUMNS)
    if out_path is not None:
        _write_rows(Path(out_path), rows, THERMO_COLUMNS, config.output_format)
        print(f"wrote {len(rows)} rows to {out_path}")
    return 0


# -- simulate mode ------------------------------------------------------------


def _observable_rows(series: ObservableSeries) -> list[dict]:
    return [
        {
            "sweep": int(series.sweep_index[i]),
            "enthalpy": float(series.enthalpy[i]),
            "self_energy": float(series.self_energy[i]),
            "interaction_energy": float(series.interaction_energy[i]),
            "momentum_per_filament": float(series.momentum_per_filament[i]),
        }
        for i in range(len(series))
    ]


def _append_rows(path: Path, rows: list[dict], columns: tuple[str, ...], fmt: str) -> None:
    exists = path.exists()
    if fmt == "csv":
        with open(path, "a", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            if not exists:
                writer.writerow(columns)
            for row in rows:
                writer.writerow(
                    [row[c] if c == "sweep" else _f17(row[c]) for c in columns]
                )
    else:
        with open(path, "a", encoding="utf-8") as fh:
            for row in rows:
                fh.write(json.dumps({c: row[c] for c in columns}))
                fh.write("\n")


def _read_observables(path: Path, fmt: str) -> dict[str, np.ndarray]:
    rows: list[dict] = []
    if fmt == "csv":
        with open(path, "r", encoding="utf-8", newline="") as fh:
            for record in csv.DictReader(fh):
                rows.append({c: float(record[c]) for c in OBSERVABLE_COLUMNS})
    else:
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    rows.append(json.loads(line))
    return {
        c: np.array([row[c] for row in rows], dtype=np.float64)
        for c in OBSERVABLE_COLUMNS
    }


def cmd_simulate(
    config: RunConfig,
    out_dir: str | None,
    resume_path: str | None,
    overwrite: bool,
) -> int:
    job = config.simulate
    out_dir = out_dir or job.output_dir or os.environ.get(ENV_OUT_DIR)
    if out_dir is None:
        raise UsageError(
            f"no output directory: pass --out, set simulate.output_dir, or set {ENV_OUT_DIR}"
        )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    obs_name = "observables.csv" if config.output_format == "csv" else "observables.jsonl"
    obs_path = out / obs_name
    summary_path = out / "summary.json"
    ckpt_path = out / "checkpoint.json"

    resume_path = resume_path or job.resume
    resume_doc = None
    if resume_path is not None:
        resume_doc = sampler_mod.read_checkpoint(resume_path)
    else:
        collisions = [p for p in (obs_path, summary_path, ckpt_path) if p.exists()]
        if collisions and not overwrite:
            raise UsageError(
                "output files already exist (pass --overwrite to replace, or --resume "
                f"to continue): {', '.join(str(p) for p in collisions)}"
            )
        for p in collisions:
            p.unlink()

    sampler_config = job.sampler

    def save_checkpoint(doc: dict) -> None:
        sampler_mod.write_checkpoint(ckpt_path, doc)

    series, checkpoint = sampler_mod.run(
        sampler_config,
        resume=resume_doc,
        checkpoint_every=job.checkpoint_every,
        on_checkpoint=save_checkpoint if job.checkpoint_every else None,
    )
    _append_rows(obs_path, _observable_rows(series), OBSERVABLE_COLUMNS, config.output_format)
    save_checkpoint(checkpoint)

    # summary statistics always cover the full observables file, so a resumed
    # run reports on the concatenated record stream
    full = _read_observables(obs_path, config.output_format)
    stats = {
        name: blocking_analysis(full[name])
        for name in OBSERVABLE_COLUMNS
        if name != "sweep"
    }
    p = sampler_config.scaled_params
    predicted_r2 = mean_square_radius(p.alpha_scaled, p.beta_scaled, p.pressure_scaled)
    measured = stats["momentum_per_filament"]
    sigma_distance = (
        abs(measured.mean - predicted_r2) / measured.std_error
        if measured.std_error > 0
        else float("inf")
    )
    summary = {
        "config": sampler_config_to_doc(sampler_config),
        "records": int(len(full["sweep"])),
        "observables": {
            name: {
                "mean": _f17(s.mean),
                "std_error": _f17(s.std_error),
                "tau_int": _f17(s.tau_int),
            }
            for name, s in stats.items()
        },
        "acceptance": {k: _f17(v) for k, v in series.acceptance.items()},
        "singular_rejections": series.singular_rejections,
        "max_energy_drift": _f17(series.max_energy_drift),
        "step_sizes": {"bead": _f17(series.bead_step), "filament": _f17(series.filament_step)},
        "radius_comparison": {
            "predicted_r_squared": _f17(predicted_r2),
            "measured_momentum_per_filament": _f17(measured.mean),
            "std_error": _f17(measured.std_error),
            "sigma_distance": _f17(sigma_distance),
            "relative_gap": _f17(abs(measured.mean - predicted_r2) / predicted_r2),
        },
    }
    with open(summary_path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")

    print(f"observables: {obs_path} ({summary['records']} records)")
    print(f"checkpoint:  {ckpt_path}")
    print(f"summary:     {summary_path}")
    print(
        "radius check: predicted R^2 = {0}, measured <M_N/N> = {1} +/- {2} "
        "(sigma distance {3}, relative gap {4})".format(
            _f6(predicted_r2),
            _f6(measured.mean),
            _f6(measured.std_error),
            _f6(sigma_distance),
            _f6(float(summary["radius_comparison"]["relative_gap"])),
        )
    )
    return 0


# -- verify mode --------------------------------------------------------------


def _suite_rsq_argmin(seed: int, scale: float) -> list[OracleReport]:
    rng = substream(seed, "oracle")
    reports = []
    for _ in range(50):
        a, b, p = 10.0 ** rng.uniform(-2.0, 2.0, size=3)
        reports.append(
            OracleReport.build(
                name="rsq-argmin",
                inputs={"alpha_scaled": a, "beta_scaled": b, "pressure_scaled": p},
                reference=oracle_mod.scan_minimize_free_energy(a, b, p),
                candidate=mean_square_radius(a, b, p),
                tolerance=1e-8 * scale,
            )
        )
    return reports


def _suite_disk_log(seed: int, scale: float) -> list[OracleReport]:
    rng = substream(seed, "oracle")
    radii = (0.5, 2.0, 8.0)
    samples = 10**6
    results = {}
    for a in radii:
        est, se = oracle_mod.disk_log_expectation(a, samples, rng)
        results[a] = (est - math.log(a * a / 4.0), se)
    reports = []
    pairs = [(radii[0], radii[1]), (radii[1], radii[2]), (radii[0], radii[2])]
    for a1, a2 in pairs:
        c1, s1 = results[a1]
        c2, s2 = results[a2]
        combined = math.hypot(s1, s2)
        reports.append(
            OracleReport.build(
                name="disk-log-radius-independence",
                inputs={"radius_1": a1, "radius_2": a2, "samples": samples},
                reference=c1,
                candidate=c2,
                tolerance=3.0 * scale,
                tolerance_kind="sigma",
                sigma=combined,
            )
        )
    quad_constant = oracle_mod.disk_log_quadrature(2.0) - math.log(1.0)
    for a in radii:
        c, s = results[a]
        reports.append(
            OracleReport.build(
                name="disk-log-vs-quadrature",
                inputs={"radius": a, "samples": samples},
                reference=quad_constant,
                candidate=c,
                tolerance=3.0 * scale,
                tolerance_kind="sigma",
                sigma=s,
            )
        )
    return reports


def _suite_derivatives(seed: int, scale: float) -> list[OracleReport]:
    rng = substream(seed, "oracle")
    beta_grid = np.logspace(math.log10(0.2), math.log10(5.0), 20)
    reports = []
    for _ in range(5):
        a, p = 10.0 ** rng.uniform(-1.0, 1.0, size=2)
        reports.extend(
            oracle_mod.finite_difference_checks(
                a,
                p,
                beta_grid,
                tol_enthalpy=1e-6 * scale,
                tol_specific_heat=1e-4 * scale,
                tol_temperature=1e-3 * scale,
            )
        )
    return reports


def _suite_appendix_limit(seed: int, scale: float) -> list[OracleReport]:
    del scale  # monotonicity has no numeric tolerance to loosen
    rng = substream(seed, "oracle")
    reports = []
    for _ in range(5):
        a, b, p = 10.0 ** rng.uniform(math.log10(0.5), math.log10(2.0), size=3)
        reports.append(
            oracle_mod.appendix_limit_check(a, b, p, (8, 16, 32, 64, 128))
        )
    return reports


_SUITE_RUNNERS = {
    "rsq-argmin": _suite_rsq_argmin,
    "disk-log": _suite_disk_log,
    "derivatives": _suite_derivatives,
    "appendix-limit": _suite_appendix_limit,
}


def run_suites(
    suites, seed: int, tolerance_scale: float = 1.0
) -> list[OracleReport]:
    reports: list[OracleReport] = []
    for name in suites:
        if name not in _SUITE_RUNNERS:
            raise UsageError(
                f"unknown verify suite {name!r}; valid suites: "
                f"{', '.join(VERIFY_SUITES)} (or 'all')"
            )
        reports.extend(_SUITE_RUNNERS[name](seed, tolerance_scale))
    return reports


def _print_reports(reports: list[OracleReport]) -> None:
    header = ("check", "reference", "candidate", "rel_error", "tolerance", "result")
    lines = []
    for r in reports:
        tol = f"{r.tolerance:g} {r.tolerance_kind}"
        lines.append(
            (
                r.name,
                _f6(r.reference),
                _f6(r.candidate),
                _f6(r.rel_error),
                tol,
                "PASS" if r.passed else "FAIL",
            )
        )
    widths = [max(len(header[i]), *(len(line[i]) for line in lines)) for i in range(6)]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for line in lines:
        print("  ".join(cell.ljust(w) for cell, w in zip(line, widths)))


def cmd_verify(
    config: RunConfig, tolerance_scale: float, out_path: str | None
) -> int:
    reports = run_suites(config.verify.suites, config.seed, tolerance_scale)
    _print_reports(reports)
    n_failed = sum(not r.passed for r in reports)
    print(f"{len(reports) - n_failed}/{len(reports)} checks passed")
    if out_path is not None:
        with open(out_path, "w", encoding="utf-8") as fh:
            for r in reports:
                fh.write(
                    json.dumps(
                        {
                            "name": r.name,
                            "inputs": {
                                k: (v if isinstance(v, (int, list, str)) else float(v))
                                for k, v in r.inputs.items()
                            },
                            "reference": r.reference,
                            "candidate": r.candidate,
                            "abs_error": r.abs_error,
                            "rel_error": r.rel_error,
                            "tolerance": r.tolerance,
                            "tolerance_kind": r.tolerance_kind,
                            "passed": r.passed,
                        }
                    )
                )
                fh.write("\n")
        print(f"wrote {len(reports)} reports to {out_path}")
    return 0 if n_failed == 0 else 1


# -- argument parsing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="filamentmc",
        description=(
            "Closed-form thermodynamics, Metropolis sampling and brute-force "
            "verification for confined filament bundles"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_thermo = sub.add_parser("thermo", help="evaluate closed forms over a sweep grid")
    p_thermo.add_argument("--config", required=True, help="path to the JSON run config")
    p_thermo.add_argument("--out", default=None, help="machine-readable output file")
    p_thermo.add_argument("--seed", type=int, default=None, help="override the config seed")

    p_sim = sub.add_parser("simulate", help="run a Metropolis chain")
    p_sim.add_argument("--config", required=True, help="path to the JSON run config")
    p_sim.add_argument("--out", default=None, help=f"output directory (default ${ENV_OUT_DIR})")
    p_sim.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_sim.add_argument("--resume", default=None, help="checkpoint file to continue from")
    p_sim.add_argument(
        "--overwrite", action="store_true", help="replace existing output files"
    )

    p_ver = sub.add_parser("verify", help="run brute-force oracle suites")
    p_ver.add_argument("--config", default=None, help="optional JSON run config")
    p_ver.add_argument(
        "--suite",
        action="append",
        default=None,
        help=f"suite to run (repeatable): {', '.join(VERIFY_SUITES)} or 'all'",
    )
    p_ver.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_ver.add_argument("--out", default=None, help="machine-readable report file (json-lines)")
    p_ver.add_argument(
        "--tolerance-scale",
        type=float,
        default=1.0,
        help="multiply every tolerance by this factor (test hook)",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "thermo":
            config = load_run_config(args.config, args.seed)
            if config.mode != "thermo":
                raise UsageError(f"config mode is {config.mode!r}, expected 'thermo'")
            return cmd_thermo(config, args.out)
        if args.command == "simulate":
            config = load_run_config(args.config, args.seed)
            if config.mode != "simulate":
                raise UsageError(f"config mode is {config.mode!r}, expected 'simulate'")
            return cmd_simulate(config, args.out, args.resume, args.overwrite)
        if args.command == "verify":
            if args.config is not None:
                config = load_run_config(args.config, args.seed)
                if config.mode != "verify":
                    raise UsageError(f"config mode is {config.mode!r}, expected 'verify'")
            else:
                seed = args.seed if args.seed is not None else DEFAULT_SEED
                config = run_config_from_doc(
                    {"schema_version": 1, "mode": "verify", "seed": seed}
                )
            if args.suite:
                config = RunConfig(
                    mode="verify",
                    seed=config.seed,
                    output_format=config.output_format,
                    verify=_build_verify_job({"suites": args.suite}),
                )
            return cmd_verify(config, args.tolerance_scale, args.out)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FilamentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
