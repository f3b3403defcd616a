"""Broken-segment filament configurations and their discretized energies.

A configuration is N periodic filaments, each sampled at M equally spaced
planes; plane k carries the planar point psi[i, k] and indices wrap modulo M.
The module works in unscaled model parameters alpha (energy*length) and
pressure p (energy/length^2); the per-filament scaled parameters exist only on
the thermodynamics side, and the conversion alpha = alpha' * N, p = p' * N,
beta = beta' / N happens at the sampler boundary.

Energies, with d tau discretized as 1/M on the periodic lattice:

    E_self = alpha * (M/2) * sum_{i,k} |psi[i,k+1] - psi[i,k]|^2
    E_pair = -(1/2) * (1/M) * sum_k sum_{i != j} log |psi[i,k] - psi[j,k]|
    E_mf   = -(N^2/4) * log(M_N / N)          (self-consistent mean field)
    M_N    = (1/M) * sum_{i,k} |psi[i,k]|^2
    H_N    = E_self + E_int + p * M_N

The pair sum runs over ordered pairs i != j with the -1/2 prefactor, so each
unordered pair contributes -log|psi_i - psi_j| in total.  Distances at or
below MIN_SEPARATION raise SingularConfigurationError instead of emitting -inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, SingularConfigurationError

__all__ = [
    "MEAN_FIELD",
    "PAIRWISE",
    "MIN_SEPARATION",
    "FilamentEnsemble",
    "EnergyBreakdown",
    "validate_kind",
    "self_energy",
    "interaction_energy_pairwise",
    "interaction_energy_meanfield",
    "interaction_energy",
    "angular_momentum",
    "enthalpy",
    "delta_enthalpy_single_bead",
]

PAIRWISE = "full-pairwise"
MEAN_FIELD = "mean-field"

# Closest admissible approach before the log interaction is declared singular.
MIN_SEPARATION = 1e-300


def validate_kind(kind: str) -> str:
    if kind not in (PAIRWISE, MEAN_FIELD):
        raise DomainError(
            f"hamiltonian_kind must be {PAIRWISE!r} or {MEAN_FIELD!r}, got {kind!r}"
        )
    return kind


@dataclass
class FilamentEnsemble:
    """N filaments of M planar beads plus the unscaled model parameters.

    positions has shape (N, M, 2); periodicity is index arithmetic mod M and
    is never stored twice.
    """

    positions: np.ndarray
    alpha: float
    pressure: float

    def __post_init__(self) -> None:
        self.positions = np.asarray(self.positions, dtype=np.float64)
        if self.positions.ndim != 3 or self.positions.shape[2] != 2:
            raise DomainError(
                f"positions must have shape (N, M, 2), got {self.positions.shape}"
            )
        if self.positions.shape[0] < 1:
            raise DomainError("need at least one filament")
        if self.positions.shape[1] < 2:
            raise DomainError("need at least two segments per filament")
        if not np.all(np.isfinite(self.positions)):
            raise DomainError("all coordinates must be finite")
        for name in ("alpha", "pressure"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0.0:
                raise DomainError(f"{name} must be finite and >= 0, got {value!r}")

    @property
    def n_filaments(self) -> int:
        return self.positions.shape[0]

    @property
    def n_segments(self) -> int:
        return self.positions.shape[1]

    def copy(self) -> "FilamentEnsemble":
        return FilamentEnsemble(self.positions.copy(), self.alpha, self.pressure)


@dataclass(frozen=True)
class EnergyBreakdown:
    """Energy components of one configuration; enthalpy re-sums them exactly."""

    self_energy: float
    interaction_energy: float
    angular_momentum: float
    enthalpy: float
    hamiltonian_kind: str = field(default=PAIRWISE)


def self_energy(ens: FilamentEnsemble) -> float:
    """Stiffness energy alpha*(M/2)*sum of squared bead-to-bead increments.

    Per-filament contributions are combined with exact summation so the total
    is bit-identical under filament relabeling.
    """
    diffs = np.roll(ens.positions, -1, axis=1) - ens.positions
    per_filament = np.sum(diffs * diffs, axis=(1, 2))
    return ens.alpha * (ens.n_segments / 2.0) * math.fsum(per_filament)


def angular_momentum(ens: FilamentEnsemble) -> float:
    """Total angular momentum (1/M)*sum |psi|^2 over all beads."""
    per_filament = np.sum(ens.positions * ens.positions, axis=(1, 2))
    return math.fsum(per_filament) / ens.n_segments


def interaction_energy_pairwise(ens: FilamentEnsemble) -> float:
    """In-plane log repulsion summed over ordered filament pairs and planes."""
    n = ens.n_filaments
    if n == 1:
        return 0.0
    iu, ju = np.triu_indices(n, k=1)
    plane_sums = []
    for k in range(ens.n_segments):
        plane = ens.positions[:, k, :]
        sep = plane[iu] - plane[ju]
        dist = np.hypot(sep[:, 0], sep[:, 1])
        if np.any(dist <= MIN_SEPARATION):
            raise SingularConfigurationError(
                f"coincident filaments in plane {k}: separation <= {MIN_SEPARATION}"
            )
        # exact summation keeps the total independent of filament labeling
        plane_sums.append(math.fsum(np.log(dist)))
    # ordered pairs with the -1/2 prefactor = -1 per unordered pair
    return -math.fsum(plane_sums) / ens.n_segments


def interaction_energy_meanfield(ens: FilamentEnsemble) -> float:
    """Mean-field interaction -(N^2/4)*log(M_N/N) at the instantaneous radius."""
    n = ens.n_filaments
    m_per = angular_momentum(ens) / n
    if m_per <= MIN_SEPARATION:
        raise SingularConfigurationError(
            "angular momentum per filament vanished; mean-field log is singular"
        )
    return -0.25 * n * n * math.log(m_per)


def interaction_energy(ens: FilamentEnsemble, kind: str) -> float:
    validate_kind(kind)
    if kind == PAIRWISE:
        return interaction_energy_pairwise(ens)
    return interaction_energy_meanfield(ens)


def enthalpy(ens: FilamentEnsemble, kind: str) -> EnergyBreakdown:
    """Full energy breakdown; H_N = E_self + E_int + p * M_N."""
    e_self = self_energy(ens)
    e_int = interaction_energy(ens, kind)
    m_n = angular_momentum(ens)
    return EnergyBreakdown(
        self_energy=e_self,
        interaction_energy=e_int,
        angular_momentum=m_n,
        enthalpy=e_self + e_int + ens.pressure * m_n,
        hamiltonian_kind=kind,
    )


def delta_enthalpy_single_bead(
    ens: FilamentEnsemble,
    filament: int,
    plane: int,
    new_position: np.ndarray,
    kind: str,
    current_angular_momentum: float | None = None,
) -> float:
    """Exact enthalpy change from moving one bead, computed incrementally.

    Touches the two adjacent self-energy increments, the plane-k interaction
    column (pairwise) or the radius-dependent log term (mean-field), and the
    angular-momentum change.  Passing the cached total angular momentum makes
    the mean-field branch O(1) and the pairwise branch O(N).
    """
    validate_kind(kind)
    n, m = ens.n_filaments, ens.n_segments
    if not (0 <= filament < n):
        raise DomainError(f"filament index {filament} out of range [0, {n})")
    if not (0 <= plane < m):
        raise DomainError(f"plane index {plane} out of range [0, {m})")
    new = np.asarray(new_position, dtype=np.float64)
    if new.shape != (2,) or not np.all(np.isfinite(new)):
        raise DomainError(f"new_position must be a finite planar point, got {new!r}")

    old = ens.positions[filament, plane]
    nxt = ens.positions[filament, (plane + 1) % m]
    prv = ens.positions[filament, (plane - 1) % m]
    d_new = float(np.sum((nxt - new) ** 2) + np.sum((new - prv) ** 2))
    d_old = float(np.sum((nxt - old) ** 2) + np.sum((old - prv) ** 2))
    delta_self = ens.alpha * (m / 2.0) * (d_new - d_old)

    delta_mn = (float(new @ new) - float(old @ old)) / m

    if kind == PAIRWISE:
        delta_int = 0.0
        for j in range(n):
            if j == filament:
                continue
            other = ens.positions[j, plane]
            dist_new = math.hypot(new[0] - other[0], new[1] - other[1])
            if dist_new <= MIN_SEPARATION:
                raise SingularConfigurationError(
                    f"proposed bead coincides with filament {j} in plane {plane}"
                )
            dist_old = math.hypot(old[0] - other[0], old[1] - other[1])
            delta_int -= (math.log(dist_new) - math.log(dist_old)) / m
    else:
        if current_angular_momentum is None:
            current_angular_momentum = angular_momentum(ens)
        m_old = current_angular_momentum
        m_new = m_old + delta_mn
        if m_new <= MIN_SEPARATION:
            raise SingularConfigurationError(
                "proposed move collapses the angular momentum to zero"
            )
        # -(N^2/4)*[log(m_new/N) - log(m_old/N)]; the /N shift cancels
        delta_int = -0.25 * n * n * (math.log(m_new) - math.log(m_old))

    return delta_self + delta_int + ens.pressure * delta_mn
