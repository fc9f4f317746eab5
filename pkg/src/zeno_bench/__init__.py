"""Weak-measurement protocols on stabilizer codes, with analytic error bounds.

The package simulates repeated weak stabilizer measurements interleaved
with Hamiltonian evolution on an exact system+bath density matrix, and
evaluates the closed-form distance bound that such protocols obey.  See
the README for the CLI and config format.
"""

from .bounds import (
    BoundParameters,
    BoundReport,
    b1_coefficient,
    bath_moment_bound,
    big_gamma,
    bound_parameters,
    f_count,
    fixed_interval_bound,
    gamma_l,
    phi_closed,
    phi_direct,
    strong_limit_bound,
    theorem1_bound,
    tradeoff_eps,
    tradeoff_tau,
)
from .config import ExperimentConfig, build_model, load_config, parse_config
from .dynamics import (
    DensityMatrix,
    ProtocolResult,
    encode_state,
    ideal_reduced_state,
    initial_joint_state,
    partial_trace_bath,
    propagate,
    run_protocol,
    trace_distance,
)
from .errors import (
    AssumptionViolationError,
    BoundViolationError,
    CapacityError,
    ConfigError,
    DegenerateMeasurementError,
    DimensionError,
    DomainError,
    InvalidCodeError,
    MembershipError,
    ModelError,
    PauliParseError,
    PhaseError,
    RankError,
    VerificationError,
    ZenoBenchError,
)
from .measurement import (
    QuantumChannel,
    alphas,
    make_channel,
    three_term_povm,
    weak_measure_generators,
    weak_measure_group,
    weak_measure_single,
    zeta,
)
from .pauli_algebra import (
    PauliOperator,
    commutes,
    identity,
    multiply,
    pauli_from_string,
    to_matrix,
)
from .stabilizer import (
    HamiltonianDecomposition,
    HamiltonianSpec,
    HamiltonianTerm,
    ProfileSegment,
    StabilizerCode,
    apply_isotypical_projector,
    build_code,
    decompose_hamiltonian,
    sigma,
    verify_isotypical_dimensions,
)
from .sweep import SweepReport, SweepRow, run_sweep, write_csv
from .verify import run_suite
from .version import __version__

__all__ = [
    "AssumptionViolationError",
    "BoundParameters",
    "BoundReport",
    "BoundViolationError",
    "CapacityError",
    "ConfigError",
    "DegenerateMeasurementError",
    "DensityMatrix",
    "DimensionError",
    "DomainError",
    "ExperimentConfig",
    "HamiltonianDecomposition",
    "HamiltonianSpec",
    "HamiltonianTerm",
    "InvalidCodeError",
    "MembershipError",
    "ModelError",
    "PauliOperator",
    "PauliParseError",
    "PhaseError",
    "ProfileSegment",
    "ProtocolResult",
    "QuantumChannel",
    "RankError",
    "StabilizerCode",
    "SweepReport",
    "SweepRow",
    "VerificationError",
    "ZenoBenchError",
    "__version__",
    "alphas",
    "apply_isotypical_projector",
    "b1_coefficient",
    "bath_moment_bound",
    "big_gamma",
    "bound_parameters",
    "build_code",
    "build_model",
    "commutes",
    "decompose_hamiltonian",
    "encode_state",
    "f_count",
    "fixed_interval_bound",
    "gamma_l",
    "ideal_reduced_state",
    "identity",
    "initial_joint_state",
    "load_config",
    "make_channel",
    "multiply",
    "parse_config",
    "partial_trace_bath",
    "pauli_from_string",
    "phi_closed",
    "phi_direct",
    "propagate",
    "run_protocol",
    "run_suite",
    "run_sweep",
    "sigma",
    "strong_limit_bound",
    "theorem1_bound",
    "three_term_povm",
    "to_matrix",
    "trace_distance",
    "tradeoff_eps",
    "tradeoff_tau",
    "verify_isotypical_dimensions",
    "weak_measure_generators",
    "weak_measure_group",
    "weak_measure_single",
    "write_csv",
    "zeta",
]
