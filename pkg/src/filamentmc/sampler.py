"""Metropolis Monte Carlo over broken-segment configurations.

The chain targets the canonical density proportional to exp(-beta * H_N) with
symmetric proposals (uniform displacements in a disk), so detailed balance
holds per move type.  Scaled parameters enter only here: the configuration
energies use alpha = alpha' * N, p = p' * N and acceptance uses
beta = beta' / N.

Step sizes adapt multiplicatively toward a target acceptance during burn-in
and are frozen afterward to keep the measurement chain Markovian with the
correct stationary law.  Energies are tracked incrementally and
resynchronized against a full recomputation on a fixed sweep cadence; the
largest observed drift is reported with the results.

All randomness flows from the single 64-bit seed through named substreams
("init", "chain", "oracle"); a run is a pure function of (seed, config).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields

import numpy as np

from . import ensemble as ens_mod
from ._kernels import KIND_MEAN_FIELD, KIND_PAIRWISE, run_sweep
from .ensemble import MEAN_FIELD, PAIRWISE, FilamentEnsemble, validate_kind
from .errors import CheckpointError, DomainError, FilamentError
from .thermo import ScaledParams, mean_square_radius

__all__ = [
    "SamplerConfig",
    "MoveStats",
    "BlockingStats",
    "ObservableSeries",
    "substream",
    "initialize",
    "sweep",
    "run",
    "blocking_analysis",
    "sampler_config_to_doc",
    "sampler_config_from_doc",
    "checkpoint_to_json",
    "checkpoint_from_json",
    "write_checkpoint",
    "read_checkpoint",
    "CHECKPOINT_FORMAT",
    "CHECKPOINT_VERSION",
]

_SUBSTREAMS = {"init": 0, "chain": 1, "oracle": 2}

CHECKPOINT_FORMAT = "filamentmc/checkpoint"
CHECKPOINT_VERSION = 1

_KIND_FLAG = {PAIRWISE: KIND_PAIRWISE, MEAN_FIELD: KIND_MEAN_FIELD}

_STEP_MIN = 1e-9
_STEP_MAX = 1e9


def substream(seed: int, name: str) -> np.random.Generator:
    """Named, independent PCG64 stream derived from the single run seed."""
    if name not in _SUBSTREAMS:
        raise DomainError(f"unknown substream {name!r}; expected one of {sorted(_SUBSTREAMS)}")
    if not (0 <= int(seed) < 2**64):
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed!r}")
    ss = np.random.SeedSequence(int(seed), spawn_key=(_SUBSTREAMS[name],))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class SamplerConfig:
    """Declarative description of one chain; beta is the independent variable."""

    scaled_params: ScaledParams
    n_filaments: int
    n_segments: int
    burn_in_sweeps: int
    measurement_sweeps: int
    seed: int
    hamiltonian_kind: str = MEAN_FIELD
    single_bead_weight: float = 0.95
    filament_translate_weight: float = 0.05
    bead_step: float = 0.5
    filament_step: float = 0.5
    thinning: int = 10
    target_acceptance: float = 0.4
    adaptation_window: int = 50
    resync_every: int = 1000

    def __post_init__(self) -> None:
        if self.scaled_params.beta_scaled is None:
            raise DomainError("sampler configs must fix beta_scaled, not enthalpy")
        if self.n_filaments < 1:
            raise DomainError("n_filaments must be >= 1")
        if self.n_segments < 2:
            raise DomainError("n_segments must be >= 2")
        validate_kind(self.hamiltonian_kind)
        for name in ("single_bead_weight", "filament_translate_weight"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0.0:
                raise DomainError(f"{name} must be finite and >= 0, got {v!r}")
        if self.single_bead_weight + self.filament_translate_weight <= 0.0:
            raise DomainError("move weights must not all be zero")
        for name in ("bead_step", "filament_step"):
            v = getattr(self, name)
            if not math.isfinite(v) or v <= 0.0:
                raise DomainError(f"{name} must be positive, got {v!r}")
        for name in ("burn_in_sweeps", "measurement_sweeps", "thinning",
                     "adaptation_window", "resync_every"):
            if getattr(self, name) < 1:
                raise DomainError(f"{name} must be >= 1")
        if not (0 <= int(self.seed) < 2**64):
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if not (0.0 < self.target_acceptance < 1.0):
            raise DomainError("target_acceptance must lie strictly between 0 and 1")

    @property
    def alpha_unscaled(self) -> float:
        return self.scaled_params.alpha_scaled * self.n_filaments

    @property
    def pressure_unscaled(self) -> float:
        return self.scaled_params.pressure_scaled * self.n_filaments

    @property
    def beta_unscaled(self) -> float:
        return self.scaled_params.beta_scaled / self.n_filaments

    @property
    def bead_probability(self) -> float:
        total = self.single_bead_weight + self.filament_translate_weight
        return self.single_bead_weight / total


@dataclass
class MoveStats:
    """Acceptance bookkeeping for one sweep or one phase."""

    bead_accepted: int = 0
    bead_attempted: int = 0
    filament_accepted: int = 0
    filament_attempted: int = 0
    singular_rejections: int = 0

    @staticmethod
    def from_counts(counts: np.ndarray) -> "MoveStats":
        return MoveStats(
            bead_accepted=int(counts[0]),
            bead_attempted=int(counts[1]),
            filament_accepted=int(counts[2]),
            filament_attempted=int(counts[3]),
            singular_rejections=int(counts[4]),
        )

    def rate(self, move: str) -> float:
        acc, att = {
            "single-bead": (self.bead_accepted, self.bead_attempted),
            "whole-filament-translate": (self.filament_accepted, self.filament_attempted),
        }[move]
        return acc / att if att else float("nan")


@dataclass(frozen=True)
class BlockingStats:
    """Mean, blocking standard error and integrated autocorrelation estimate."""

    mean: float
    std_error: float
    tau_int: float


@dataclass
class ObservableSeries:
    """Thinned per-measurement records with blocking-error statistics."""

    sweep_index: np.ndarray
    enthalpy: np.ndarray
    self_energy: np.ndarray
    interaction_energy: np.ndarray
    momentum_per_filament: np.ndarray
    stats: dict[str, BlockingStats]
    acceptance: dict[str, float]
    singular_rejections: int
    max_energy_drift: float
    bead_step: float
    filament_step: float

    OBSERVABLES = ("enthalpy", "self_energy", "interaction_energy", "momentum_per_filament")

    def __len__(self) -> int:
        return len(self.sweep_index)


def blocking_analysis(series: np.ndarray) -> BlockingStats:
    """Recursive pairwise block averaging (block sizes 2^k).

    Returns the largest standard-error estimate across blocking levels that
    retain at least 16 blocks, which is the conservative plateau proxy, and
    tau_int = (se / se_naive)^2 / 2 (0.5 for uncorrelated data).
    """
    x = np.asarray(series, dtype=np.float64)
    n = x.size
    mean = float(x.mean()) if n else float("nan")
    if n < 2:
        return BlockingStats(mean=mean, std_error=0.0, tau_int=0.5)
    se_naive = float(np.sqrt(x.var(ddof=1) / n))
    best = se_naive
    level = x
    while level.size >= 32:
        half = level.size // 2
        level = 0.5 * (level[: 2 * half : 2] + level[1 : 2 * half : 2])
        if level.size < 16:
            break
        best = max(best, float(np.sqrt(level.var(ddof=1) / level.size)))
    tau = 0.5 * (best / se_naive) ** 2 if se_naive > 0.0 else 0.5
    return BlockingStats(mean=mean, std_error=best, tau_int=tau)


def initialize(config: SamplerConfig, radius_scale: float = 1.0) -> FilamentEnsemble:
    """Straight filaments placed uniformly on the disk of radius 2*sqrt(R^2_pred).

    The predicted radius comes from the closed-form stationary R^2 at the
    config's scaled parameters; it is only a start state, not a constraint.
    radius_scale widens the start disk for stationarity cross-checks.
    """
    p = config.scaled_params
    r2_pred = mean_square_radius(p.alpha_scaled, p.beta_scaled, p.pressure_scaled)
    disk_radius = 2.0 * math.sqrt(r2_pred) * radius_scale
    rng = substream(config.seed, "init")
    radii = disk_radius * np.sqrt(rng.random(config.n_filaments))
    angles = 2.0 * np.pi * rng.random(config.n_filaments)
    centers = np.stack([radii * np.cos(angles), radii * np.sin(angles)], axis=-1)
    positions = np.repeat(centers[:, None, :], config.n_segments, axis=1)
    return FilamentEnsemble(positions, config.alpha_unscaled, config.pressure_unscaled)


def sweep(
    ensemble: FilamentEnsemble,
    config: SamplerConfig,
    rng: np.random.Generator,
) -> tuple[FilamentEnsemble, MoveStats]:
    """One sweep of N*M Metropolis proposals; returns the new state and stats.

    Singular proposals are auto-rejected and counted, never fatal.
    """
    out = ensemble.copy()
    totals = np.array(
        [
            ens_mod.self_energy(out),
            ens_mod.interaction_energy(out, config.hamiltonian_kind),
            ens_mod.angular_momentum(out),
        ]
    )
    counts = np.zeros(5, dtype=np.int64)
    rand = rng.random((config.n_filaments * config.n_segments, 5))
    run_sweep(
        out.positions,
        rand,
        config.alpha_unscaled,
        config.pressure_unscaled,
        config.beta_unscaled,
        _KIND_FLAG[config.hamiltonian_kind],
        config.bead_probability,
        config.bead_step,
        config.filament_step,
        totals,
        counts,
    )
    return out, MoveStats.from_counts(counts)


class _Chain:
    """Mutable sampler state: positions, RNG, running energies, counters."""

    def __init__(self, config: SamplerConfig):
        self.config = config
        self.positions: np.ndarray | None = None
        self.rng: np.random.Generator | None = None
        self.totals = np.zeros(3)
        self.counts = np.zeros(5, dtype=np.int64)
        self.burn_done = 0
        self.meas_done = 0
        self.bead_step = config.bead_step
        self.filament_step = config.filament_step
        self.max_drift = 0.0
        self._window_start = np.zeros(5, dtype=np.int64)
        self._meas_start = np.zeros(5, dtype=np.int64)
        self.records: list[tuple[int, float, float, float, float]] = []

    @classmethod
    def fresh(cls, config: SamplerConfig) -> "_Chain":
        chain = cls(config)
        start = initialize(config)
        chain.positions = start.positions
        chain.rng = substream(config.seed, "chain")
        chain._recompute_totals()
        return chain

    # -- energy bookkeeping ------------------------------------------------

    def _as_ensemble(self) -> FilamentEnsemble:
        return FilamentEnsemble(
            self.positions, self.config.alpha_unscaled, self.config.pressure_unscaled
        )

    def _fresh_totals(self) -> np.ndarray:
        snapshot = self._as_ensemble()
        return np.array(
            [
                ens_mod.self_energy(snapshot),
                ens_mod.interaction_energy(snapshot, self.config.hamiltonian_kind),
                ens_mod.angular_momentum(snapshot),
            ]
        )

    def _recompute_totals(self) -> None:
        self.totals = self._fresh_totals()

    def running_enthalpy(self) -> float:
        return float(
            self.totals[0] + self.totals[1] + self.config.pressure_unscaled * self.totals[2]
        )

    def _resync(self) -> None:
        fresh = self._fresh_totals()
        p = self.config.pressure_unscaled
        running_h = self.running_enthalpy()
        fresh_h = float(fresh[0] + fresh[1] + p * fresh[2])
        self.max_drift = max(self.max_drift, abs(running_h - fresh_h))
        self.totals = fresh

    # -- sweeping ----------------------------------------------------------

    def _do_sweep(self) -> None:
        cfg = self.config
        rand = self.rng.random((cfg.n_filaments * cfg.n_segments, 5))
        run_sweep(
            self.positions,
            rand,
            cfg.alpha_unscaled,
            cfg.pressure_unscaled,
            cfg.beta_unscaled,
            _KIND_FLAG[cfg.hamiltonian_kind],
            cfg.bead_probability,
            self.bead_step,
            self.filament_step,
            self.totals,
            self.counts,
        )
        h = self.running_enthalpy()
        if not math.isfinite(h):
            raise FilamentError(
                f"enthalpy became non-finite ({h!r}) after sweep "
                f"{self.burn_done + self.meas_done + 1}; run aborted"
            )

    def _global_sweeps(self) -> int:
        return self.burn_done + self.meas_done

    def burn_sweep(self) -> None:
        self._do_sweep()
        self.burn_done += 1
        if self.burn_done % self.config.adaptation_window == 0:
            self._adapt()
        if self._global_sweeps() % self.config.resync_every == 0:
            self._resync()
        if self.burn_done == self.config.burn_in_sweeps:
            self._meas_start = self.counts.copy()

    def measure_sweep(self) -> None:
        self._do_sweep()
        self.meas_done += 1
        if self.meas_done % self.config.thinning == 0:
            self._record()
        if self._global_sweeps() % self.config.resync_every == 0:
            self._resync()

    def _record(self) -> None:
        self.records.append(
            (
                self.meas_done,
                self.running_enthalpy(),
                float(self.totals[0]),
                float(self.totals[1]),
                float(self.totals[2]) / self.config.n_filaments,
            )
        )

    def _adapt(self) -> None:
        window = self.counts - self._window_start
        self._window_start = self.counts.copy()
        target = self.config.target_acceptance
        if window[1] > 0:
            rate = window[0] / window[1]
            factor = min(2.0, max(0.5, math.exp(rate - target)))
            self.bead_step = min(_STEP_MAX, max(_STEP_MIN, self.bead_step * factor))
        if window[3] > 0:
            rate = window[2] / window[3]
            factor = min(2.0, max(0.5, math.exp(rate - target)))
            self.filament_step = min(_STEP_MAX, max(_STEP_MIN, self.filament_step * factor))

    # -- results -----------------------------------------------------------

    def measurement_stats(self) -> MoveStats:
        return MoveStats.from_counts(self.counts - self._meas_start)

    def build_series(self) -> ObservableSeries:
        rec = np.array(self.records, dtype=np.float64).reshape(len(self.records), 5)
        columns = {
            "enthalpy": rec[:, 1],
            "self_energy": rec[:, 2],
            "interaction_energy": rec[:, 3],
            "momentum_per_filament": rec[:, 4],
        }
        move_stats = self.measurement_stats()
        return ObservableSeries(
            sweep_index=rec[:, 0].astype(np.int64),
            stats={name: blocking_analysis(x) for name, x in columns.items()},
            acceptance={
                "single-bead": move_stats.rate("single-bead"),
                "whole-filament-translate": move_stats.rate("whole-filament-translate"),
            },
            singular_rejections=move_stats.singular_rejections,
            max_energy_drift=self.max_drift,
            bead_step=self.bead_step,
            filament_step=self.filament_step,
            **columns,
        )

    # -- checkpointing -----------------------------------------------------

    def make_checkpoint(self) -> dict:
        return {
            "format": CHECKPOINT_FORMAT,
            "schema_version": CHECKPOINT_VERSION,
            "config": sampler_config_to_doc(self.config),
            "sweeps": {"burn_in_done": self.burn_done, "measurement_done": self.meas_done},
            "rng": _rng_state_to_doc(self.rng),
            "step_sizes": {"bead": _f17(self.bead_step), "filament": _f17(self.filament_step)},
            "running_totals": {
                "self_energy": _f17(self.totals[0]),
                "interaction_energy": _f17(self.totals[1]),
                "angular_momentum": _f17(self.totals[2]),
            },
            "counters": {
                "cumulative": [int(c) for c in self.counts],
                "window_start": [int(c) for c in self._window_start],
                "measurement_start": [int(c) for c in self._meas_start],
            },
            "max_energy_drift": _f17(self.max_drift),
            "records_written": self.meas_done // self.config.thinning,
            "positions": [
                [[_f17(x), _f17(y)] for x, y in filament] for filament in self.positions
            ],
        }

    @classmethod
    def from_checkpoint(cls, config: SamplerConfig, doc: dict) -> "_Chain":
        _check_checkpoint_header(doc)
        stored = sampler_config_from_doc(doc["config"])
        _require_compatible(stored, config)
        chain = cls(config)
        chain.positions = np.array(
            [[[float(x), float(y)] for x, y in fil] for fil in doc["positions"]],
            dtype=np.float64,
        )
        expected = (config.n_filaments, config.n_segments, 2)
        if chain.positions.shape != expected:
            raise CheckpointError(
                f"checkpoint positions have shape {chain.positions.shape}, expected {expected}"
            )
        chain.rng = _rng_from_doc(doc["rng"])
        chain.burn_done = int(doc["sweeps"]["burn_in_done"])
        chain.meas_done = int(doc["sweeps"]["measurement_done"])
        chain.bead_step = float(doc["step_sizes"]["bead"])
        chain.filament_step = float(doc["step_sizes"]["filament"])
        chain.totals = np.array(
            [
                float(doc["running_totals"]["self_energy"]),
                float(doc["running_totals"]["interaction_energy"]),
                float(doc["running_totals"]["angular_momentum"]),
            ]
        )
        counters = doc["counters"]
        chain.counts = np.array(counters["cumulative"], dtype=np.int64)
        chain._window_start = np.array(counters["window_start"], dtype=np.int64)
        chain._meas_start = np.array(counters["measurement_start"], dtype=np.int64)
        chain.max_drift = float(doc["max_energy_drift"])
        return chain


def run(
    config: SamplerConfig,
    resume: dict | None = None,
    checkpoint_every: int | None = None,
    on_checkpoint=None,
) -> tuple[ObservableSeries, dict]:
    """Burn in, adapt, measure; returns the series and the final checkpoint.

    With resume, continues a checkpointed chain toward this config's sweep
    targets; the returned series holds only records produced by this call, so
    interrupted-plus-resumed records concatenate to the uninterrupted stream.
    """
    if resume is None:
        chain = _Chain.fresh(config)
    else:
        chain = _Chain.from_checkpoint(config, resume)
        if chain.burn_done > config.burn_in_sweeps or chain.meas_done > config.measurement_sweeps:
            raise CheckpointError(
                "checkpoint is already past this config's sweep targets "
                f"(burn {chain.burn_done}/{config.burn_in_sweeps}, "
                f"measure {chain.meas_done}/{config.measurement_sweeps})"
            )
    while chain.burn_done < config.burn_in_sweeps:
        chain.burn_sweep()
    while chain.meas_done < config.measurement_sweeps:
        chain.measure_sweep()
        if (
            checkpoint_every
            and on_checkpoint is not None
            and chain.meas_done % checkpoint_every == 0
            and chain.meas_done < config.measurement_sweeps
        ):
            on_checkpoint(chain.make_checkpoint())
    return chain.build_series(), chain.make_checkpoint()


# -- checkpoint serialization ----------------------------------------------


def _f17(x: float) -> str:
    # 17 significant decimal digits: lossless round-trip for IEEE doubles
    return format(float(x), ".17g")


def sampler_config_to_doc(config: SamplerConfig) -> dict:
    p = config.scaled_params
    return {
        "scaled_params": {
            "alpha_scaled": _f17(p.alpha_scaled),
            "pressure_scaled": _f17(p.pressure_scaled),
            "beta_scaled": _f17(p.beta_scaled),
        },
        "n_filaments": config.n_filaments,
        "n_segments": config.n_segments,
        "hamiltonian_kind": config.hamiltonian_kind,
        "single_bead_weight": _f17(config.single_bead_weight),
        "filament_translate_weight": _f17(config.filament_translate_weight),
        "bead_step": _f17(config.bead_step),
        "filament_step": _f17(config.filament_step),
        "burn_in_sweeps": config.burn_in_sweeps,
        "measurement_sweeps": config.measurement_sweeps,
        "thinning": config.thinning,
        "seed": int(config.seed),
        "target_acceptance": _f17(config.target_acceptance),
        "adaptation_window": config.adaptation_window,
        "resync_every": config.resync_every,
    }


def sampler_config_from_doc(doc: dict) -> SamplerConfig:
    sp = doc["scaled_params"]
    return SamplerConfig(
        scaled_params=ScaledParams(
            alpha_scaled=float(sp["alpha_scaled"]),
            pressure_scaled=float(sp["pressure_scaled"]),
            beta_scaled=float(sp["beta_scaled"]),
        ),
        n_filaments=int(doc["n_filaments"]),
        n_segments=int(doc["n_segments"]),
        hamiltonian_kind=doc["hamiltonian_kind"],
        single_bead_weight=float(doc["single_bead_weight"]),
        filament_translate_weight=float(doc["filament_translate_weight"]),
        bead_step=float(doc["bead_step"]),
        filament_step=float(doc["filament_step"]),
        burn_in_sweeps=int(doc["burn_in_sweeps"]),
        measurement_sweeps=int(doc["measurement_sweeps"]),
        thinning=int(doc["thinning"]),
        seed=int(doc["seed"]),
        target_acceptance=float(doc["target_acceptance"]),
        adaptation_window=int(doc["adaptation_window"]),
        resync_every=int(doc["resync_every"]),
    )


def _require_compatible(stored: SamplerConfig, requested: SamplerConfig) -> None:
    # measurement_sweeps is the continuation target and may legitimately grow
    for f in fields(SamplerConfig):
        if f.name == "measurement_sweeps":
            continue
        if getattr(stored, f.name) != getattr(requested, f.name):
            raise CheckpointError(
                f"checkpoint config field {f.name!r} differs from the requested run: "
                f"{getattr(stored, f.name)!r} != {getattr(requested, f.name)!r}"
            )


def _rng_state_to_doc(rng: np.random.Generator) -> dict:
    state = rng.bit_generator.state
    if state["bit_generator"] != "PCG64":
        raise CheckpointError(f"unsupported bit generator {state['bit_generator']!r}")
    return {
        "algorithm": "PCG64",
        "state": int(state["state"]["state"]),
        "inc": int(state["state"]["inc"]),
        "has_uint32": int(state["has_uint32"]),
        "uinteger": int(state["uinteger"]),
    }


def _rng_from_doc(doc: dict) -> np.random.Generator:
    if doc.get("algorithm") != "PCG64":
        raise CheckpointError(
            f"checkpoint RNG algorithm {doc.get('algorithm')!r} is not supported; expected PCG64"
        )
    bg = np.random.PCG64()
    bg.state = {
        "bit_generator": "PCG64",
        "state": {"state": int(doc["state"]), "inc": int(doc["inc"])},
        "has_uint32": int(doc["has_uint32"]),
        "uinteger": int(doc["uinteger"]),
    }
    return np.random.Generator(bg)


def _check_checkpoint_header(doc: dict) -> None:
    if not isinstance(doc, dict) or doc.get("format") != CHECKPOINT_FORMAT:
        raise CheckpointError("not a filamentmc checkpoint document")
    version = doc.get("schema_version")
    if version != CHECKPOINT_VERSION:
        raise CheckpointError(
            f"checkpoint schema version {version!r} does not match {CHECKPOINT_VERSION}; "
            "migrate the checkpoint before resuming"
        )


def checkpoint_to_json(doc: dict) -> str:
    return json.dumps(doc, indent=None, separators=(",", ":"))


def checkpoint_from_json(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CheckpointError(f"checkpoint is not valid JSON: {exc}") from exc
    _check_checkpoint_header(doc)
    return doc


def write_checkpoint(path, doc: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(checkpoint_to_json(doc))
        fh.write("\n")


def read_checkpoint(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return checkpoint_from_json(fh.read())
