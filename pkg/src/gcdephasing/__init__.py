"""Qubit-qutrit entanglement and local quantum uncertainty under general collective dephasing."""
from .analysis import (
    ClassifierConfig,
    Fate,
    Regime,
    RegimeLabel,
    asymptotic_correlations,
    classify,
    schmidt_fate,
    sudden_death_time,
)
from .correlations import lqu, lqu_bruteforce, lqu_witness, negativity, skew_information
from .dynamics import (
    DEFAULT_ORIENTATIONS,
    Orientation,
    Trajectory,
    asymptotic_state,
    build_generator,
    collective_operator,
    double_commutator_generator,
    evolve_exact,
    evolve_exact_many,
    evolve_ode,
    evolve_superop,
    sample_trajectory,
    stochastic_unfold,
    stochastic_unfold_path,
)
from .linalg import hermitian_eigendecompose, partial_trace, partial_transpose_qubit, psd_sqrt, trace_distance
from .states import (
    arbitrary_pure,
    bell_states,
    isotropic,
    maximally_mixed,
    pure_density,
    rho_alpha_beta,
    rho_alpha_gamma,
    schmidt_state,
    validate,
)

__version__ = "0.1.0"
