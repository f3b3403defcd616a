"""Closed-form mean-field thermodynamics of a confined filament bundle.

All quantities live in the per-filament scaled variables that keep the
large-bundle limit finite: core constant alpha' (energy*length), pressure p'
(energy/length^2), inverse temperature beta' (1/energy) and enthalpy per
filament H0' (energy).  The central objects:

    R^2(a', b', p') = (b'^2 a' + sqrt(b'^4 a'^2 + 32 a' b'^2 p')) / (8 a' b'^2 p')
    F(a', b', p', R^2) = p' R^2 - (1/4) log R^2 + 1 / (2 a' b'^2 R^2)
    H0'(b')  = d(b' F)/db'         (evaluated in envelope form at stationary R^2)
    S        = b' (H0' - F)
    c_p      = -b'^2 dH0'/db' = (b'/4) (a'b'^2 / sqrt(a'b'^2 (a'b'^2 + 32 p')) - 1)

c_p is strictly negative for every positive parameter triple, which is the
regime of interest here.  Every formula in this module is cross-checked by the
brute-force routines in :mod:`filamentmc.oracle`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError, UnreachableEnthalpyError

__all__ = [
    "ScaledParams",
    "ThermoPoint",
    "mean_square_radius",
    "free_energy",
    "enthalpy_of_beta",
    "enthalpy_supremum",
    "specific_heat",
    "entropy_per_filament",
    "solve_beta_for_enthalpy",
    "solve_point",
    "finite_m_eta0",
    "finite_m_free_energy",
]


def _require_positive(**kwargs: float) -> None:
    for name, value in kwargs.items():
        if not math.isfinite(value) or value <= 0.0:
            raise DomainError(f"{name} must be a finite positive number, got {value!r}")


@dataclass(frozen=True)
class ScaledParams:
    """Per-filament model parameters; exactly one of beta/enthalpy is the input.

    alpha_scaled: core-structure constant per filament (energy*length), > 0.
    pressure_scaled: pressure per filament (energy/length^2), > 0.
    beta_scaled: scaled inverse temperature (1/energy), optional.
    enthalpy_per_filament: enthalpy per filament (energy), optional.
    """

    alpha_scaled: float
    pressure_scaled: float
    beta_scaled: float | None = None
    enthalpy_per_filament: float | None = None

    def __post_init__(self) -> None:
        _require_positive(
            alpha_scaled=self.alpha_scaled, pressure_scaled=self.pressure_scaled
        )
        has_beta = self.beta_scaled is not None
        has_h = self.enthalpy_per_filament is not None
        if has_beta == has_h:
            raise DomainError(
                "exactly one of beta_scaled / enthalpy_per_filament must be set"
            )
        if has_beta:
            _require_positive(beta_scaled=self.beta_scaled)
        else:
            h = self.enthalpy_per_filament
            if not math.isfinite(h):
                raise DomainError(f"enthalpy_per_filament must be finite, got {h!r}")


@dataclass(frozen=True)
class ThermoPoint:
    """One solved thermodynamic state.

    entropy is the maximal entropy per filament (log of the accessible-state
    weight per filament); temperature is 1/beta_scaled in energy units;
    specific_heat is dimensionless and negative for all admissible parameters.
    """

    params: ScaledParams
    r_squared: float
    free_energy: float
    entropy: float
    enthalpy: float
    temperature: float
    specific_heat: float

    @property
    def beta_scaled(self) -> float:
        return 1.0 / self.temperature


def mean_square_radius(
    alpha_scaled: float, beta_scaled: float, pressure_scaled: float
) -> float:
    """Most-probable mean-square bundle radius.

    Unique positive stationary point of the free energy over R^2:
        R^2 = (b^2 a + sqrt(b^4 a^2 + 32 a b^2 p)) / (8 a b^2 p).
    """
    _require_positive(
        alpha_scaled=alpha_scaled,
        beta_scaled=beta_scaled,
        pressure_scaled=pressure_scaled,
    )
    a, b, p = alpha_scaled, beta_scaled, pressure_scaled
    ab2 = a * b * b
    return (ab2 + math.sqrt(ab2 * ab2 + 32.0 * ab2 * p)) / (8.0 * ab2 * p)


def free_energy(
    alpha_scaled: float,
    beta_scaled: float,
    pressure_scaled: float,
    r_squared: float,
) -> float:
    """Free energy per filament at an arbitrary (not necessarily stationary) R^2."""
    _require_positive(
        alpha_scaled=alpha_scaled,
        beta_scaled=beta_scaled,
        pressure_scaled=pressure_scaled,
        r_squared=r_squared,
    )
    return (
        pressure_scaled * r_squared
        - 0.25 * math.log(r_squared)
        + 1.0 / (2.0 * alpha_scaled * beta_scaled * beta_scaled * r_squared)
    )


def enthalpy_of_beta(
    alpha_scaled: float, beta_scaled: float, pressure_scaled: float
) -> float:
    """Enthalpy per filament as a function of inverse temperature.

    Envelope form of d(b F)/db, valid because R^2 is stationary for F:
        H0' = p R^2 - (1/4) log R^2 - 1 / (2 a b^2 R^2).
    Strictly increasing in beta (the sign flip behind the negative specific
    heat), with supremum (1 + log 4p) / 4 as beta -> infinity.
    """
    r2 = mean_square_radius(alpha_scaled, beta_scaled, pressure_scaled)
    return (
        pressure_scaled * r2
        - 0.25 * math.log(r2)
        - 1.0 / (2.0 * alpha_scaled * beta_scaled * beta_scaled * r2)
    )


def enthalpy_supremum(pressure_scaled: float) -> float:
    """Least upper bound of enthalpy_of_beta over all beta, (1 + log 4p) / 4."""
    _require_positive(pressure_scaled=pressure_scaled)
    return 0.25 * (1.0 + math.log(4.0 * pressure_scaled))


def specific_heat(
    alpha_scaled: float, beta_scaled: float, pressure_scaled: float
) -> float:
    """Specific heat at constant pressure, strictly negative for p > 0.

        c_p = (b/4) * (a b^2 / sqrt(a b^2 (a b^2 + 32 p)) - 1)

    p = 0 is admitted as the boundary limit, where c_p is exactly 0.
    """
    _require_positive(alpha_scaled=alpha_scaled, beta_scaled=beta_scaled)
    if not math.isfinite(pressure_scaled) or pressure_scaled < 0.0:
        raise DomainError(
            f"pressure_scaled must be finite and >= 0, got {pressure_scaled!r}"
        )
    ab2 = alpha_scaled * beta_scaled * beta_scaled
    ratio = ab2 / math.sqrt(ab2 * (ab2 + 32.0 * pressure_scaled))
    return 0.25 * beta_scaled * (ratio - 1.0)


def entropy_per_filament(
    alpha_scaled: float,
    beta_scaled: float,
    pressure_scaled: float,
    enthalpy_per_filament: float,
) -> float:
    """Maximal entropy per filament at the stationary radius.

        S = b H0' + (b/4) log R^2 - 1 / (2 a b R^2) - b p R^2

    The caller supplies H0'; passing enthalpy_of_beta at the same arguments
    reproduces the Legendre identity S = b (H0' - F).
    """
    if not math.isfinite(enthalpy_per_filament):
        raise DomainError(
            f"enthalpy_per_filament must be finite, got {enthalpy_per_filament!r}"
        )
    r2 = mean_square_radius(alpha_scaled, beta_scaled, pressure_scaled)
    b = beta_scaled
    return (
        b * enthalpy_per_filament
        + 0.25 * b * math.log(r2)
        - 1.0 / (2.0 * alpha_scaled * b * r2)
        - b * pressure_scaled * r2
    )


_BRACKET_LO = 1e-6
_BRACKET_HI = 1e6
_BRACKET_LIMIT_LO = 1e-12
_BRACKET_LIMIT_HI = 1e12


def solve_beta_for_enthalpy(
    alpha_scaled: float, pressure_scaled: float, enthalpy_per_filament: float
) -> float:
    """Invert the enthalpy-temperature relation for the unique beta.

    Bisection on the strictly monotone map beta -> H0'(beta), starting from
    the bracket [1e-6, 1e6] with geometric expansion, absolute tolerance 1e-12
    on beta and 1e-10 relative on the recovered enthalpy.
    """
    _require_positive(alpha_scaled=alpha_scaled, pressure_scaled=pressure_scaled)
    h = enthalpy_per_filament
    if not math.isfinite(h):
        raise DomainError(f"enthalpy_per_filament must be finite, got {h!r}")
    h_sup = enthalpy_supremum(pressure_scaled)
    if h >= h_sup:
        raise UnreachableEnthalpyError(h, h_sup)

    def residual(beta: float) -> float:
        return enthalpy_of_beta(alpha_scaled, beta, pressure_scaled) - h

    lo, hi = _BRACKET_LO, _BRACKET_HI
    while residual(lo) > 0.0:
        lo *= 0.1
        if lo < _BRACKET_LIMIT_LO:
            raise ConvergenceError(
                f"failed to bracket beta below {_BRACKET_LO} down to {_BRACKET_LIMIT_LO}"
            )
    while residual(hi) < 0.0:
        hi *= 10.0
        if hi > _BRACKET_LIMIT_HI:
            raise ConvergenceError(
                f"failed to bracket beta above {_BRACKET_HI} up to {_BRACKET_LIMIT_HI}"
            )

    h_scale = max(abs(h), 1.0)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # interval at floating-point resolution
        r = residual(mid)
        if r < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 and abs(r) <= 1e-10 * h_scale:
            break
    beta = 0.5 * (lo + hi)
    if abs(residual(beta)) > 1e-10 * h_scale:
        raise ConvergenceError(
            f"bisection stalled at beta={beta!r} with residual {residual(beta)!r}"
        )
    return beta


def solve_point(params: ScaledParams) -> ThermoPoint:
    """Fill every thermodynamic field for the given parameters."""
    a, p = params.alpha_scaled, params.pressure_scaled
    if params.beta_scaled is not None:
        beta = params.beta_scaled
        h = enthalpy_of_beta(a, beta, p)
    else:
        h = params.enthalpy_per_filament
        beta = solve_beta_for_enthalpy(a, p, h)
    r2 = mean_square_radius(a, beta, p)
    f = free_energy(a, beta, p, r2)
    return ThermoPoint(
        params=params,
        r_squared=r2,
        free_energy=f,
        entropy=entropy_per_filament(a, beta, p, h),
        enthalpy=h,
        temperature=1.0 / beta,
        specific_heat=specific_heat(a, beta, p),
    )


def finite_m_eta0(
    alpha: float, beta: float, n_segments: int, r_squared: float
) -> float:
    """Transfer parameter of the M-segment periodic chain at fixed radius.

        eta0 = sqrt(1 / (M a b R^2)^2 + 1)

    Tends to 1 as M grows; equals sqrt(2) when M a b R^2 = 1.
    """
    _require_positive(alpha=alpha, beta=beta, n_segments=n_segments, r_squared=r_squared)
    eps = 1.0 / (n_segments * alpha * beta * r_squared)
    return math.sqrt(eps * eps + 1.0)


def finite_m_free_energy(
    alpha: float,
    beta: float,
    pressure: float,
    n_filaments: int,
    n_segments: int,
    r_squared: float,
) -> float:
    """Free energy per filament of the M-segment chain at fixed radius.

        F(M) = p R^2 - (N/4) log R^2 - a M^2 R^2 (eta0 - 1)
               + (M/b) log(eta0 + sqrt(eta0^2 - 1))

    Converges to free_energy at the same arguments as M -> infinity (at N=1),
    with gap O(1/M^2).  eta0 - 1 and the arccosh are evaluated through
    eps = 1/(M a b R^2) to avoid cancellation at large M.
    """
    _require_positive(
        alpha=alpha,
        beta=beta,
        pressure=pressure,
        n_filaments=n_filaments,
        n_segments=n_segments,
        r_squared=r_squared,
    )
    m = n_segments
    eps = 1.0 / (m * alpha * beta * r_squared)
    eta0 = math.sqrt(eps * eps + 1.0)
    # eta0 - 1 = eps^2/(eta0 + 1) exactly; arccosh(eta0) = asinh(eps).
    eta0_minus_1 = eps * eps / (eta0 + 1.0)
    return (
        pressure * r_squared
        - 0.25 * n_filaments * math.log(r_squared)
        - alpha * m * m * r_squared * eta0_minus_1
        + (m / beta) * math.asinh(eps)
    )
