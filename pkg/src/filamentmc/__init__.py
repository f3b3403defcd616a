"""Statistical mechanics of confined, nearly parallel filament bundles.

Closed-form mean-field thermodynamics (radius, free energy, entropy,
enthalpy, negative specific heat), a broken-segment Metropolis sampler over
filament configurations, and brute-force oracles that verify every closed
form independently.
"""

from .ensemble import (
    MEAN_FIELD,
    PAIRWISE,
    EnergyBreakdown,
    FilamentEnsemble,
    angular_momentum,
    delta_enthalpy_single_bead,
    enthalpy,
    interaction_energy_meanfield,
    interaction_energy_pairwise,
    self_energy,
)
from .errors import (
    CheckpointError,
    ConvergenceError,
    DomainError,
    FilamentError,
    ScanRangeError,
    SingularConfigurationError,
    UnreachableEnthalpyError,
    UsageError,
)
from .oracle import OracleReport
from .sampler import (
    BlockingStats,
    MoveStats,
    ObservableSeries,
    SamplerConfig,
    blocking_analysis,
    initialize,
    run,
    substream,
    sweep,
)
from .thermo import (
    ScaledParams,
    ThermoPoint,
    enthalpy_of_beta,
    enthalpy_supremum,
    entropy_per_filament,
    finite_m_eta0,
    finite_m_free_energy,
    free_energy,
    mean_square_radius,
    solve_beta_for_enthalpy,
    solve_point,
    specific_heat,
)

__version__ = "0.1.0"
