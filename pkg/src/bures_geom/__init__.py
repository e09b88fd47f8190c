"""Bures geometry of mixed quantum states: distances, volumes and normalization
constants, each cross-checked by Monte Carlo."""

from .exact import ExactValue
from .matcore import NotPSDError, ValidationError
from .measures import (
    DomainError,
    EnsembleParams,
    bures_volume,
    flag_volume,
    generalized_constant,
    hall_constant,
    joint_logdensity,
    pure_state_volume,
    selberg_lorentz,
    submanifold_volume,
    surface_to_volume_ratio,
)
from .metrics import (
    MCFunctionKind,
    bures_angle,
    bures_distance,
    fidelity,
    fubini_study,
    hs_distance,
    hubner_line_element,
    trace_distance,
)
from .montecarlo import MCConfig, MCEstimate, mc_simplex_integral, mcmc_eigenvalues, sample_state
from .states import DensityMatrix, KrausChannel, apply_channel, new_density

__version__ = "0.1.0"
