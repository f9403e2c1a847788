"""Error-probability bounds for quantum-illumination and coherent-state target detection."""

from .bounds import (
    BoundResult,
    ChannelParams,
    MarginPolicy,
    Regime,
    RegimeNotApplicable,
    RegimeReport,
    classify_regime,
    cs_bound,
    cs_single_shot_error,
    homodyne_bound,
    majority_vote_bound,
    qi_bound,
    sp_bound,
)
from .chernoff import ChernoffResult, DiscreteDistribution, bound_from_exponent, classical_chernoff, quantum_chernoff
from .fock import (
    DensityOperator,
    StateVector,
    TruncationConfig,
    TruncationError,
    coherent_state,
    displaced_thermal_state,
    helstrom_error,
    matrix_fractional_power,
    photon_number_distribution,
    thermal_state,
)

__version__ = "0.1.0"
