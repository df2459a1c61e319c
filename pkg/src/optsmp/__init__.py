"""Finite truncation and communication tradeoffs for optical SMP protocols.

The package models multimode optical message states sparsely in the photon
number basis, truncates them below a mean-photon cutoff with certified error
bounds, counts the dimension of the surviving subspace, and evaluates the
exact error of concrete simultaneous-message protocols before and after
truncation.
"""

from .bounds import (
    ComplexityReference,
    ReportPoint,
    TradeoffRow,
    build_report,
    classical_tradeoff_lhs,
    default_references,
    equality_reference,
    qfp_report_points,
    quantum_tradeoff_lhs,
)
from .combinatorics import (
    LogRankBounds,
    RankCount,
    binary_entropy,
    binomial_power_bound,
    count_rank,
    entropy_bound,
    entropy_profile,
    iter_occupations,
    log_rank_bounds,
    markov_photon_cutoff,
)
from .errors import (
    BasisMismatchError,
    ConfigError,
    DimensionCapError,
    ModeMismatchError,
    NormalizationError,
    OptSmpError,
    PremiseViolationError,
    SupportCapError,
    VacuousTruncationError,
)
from .fock import (
    DenseOperator,
    FockDiagonalState,
    ProductPureState,
    PureState,
    coherent_state,
    cutoff_for_tail,
    fidelity,
    mean_photon_number,
    overlap,
    photon_number_distribution,
    poisson_tail,
    state_from_json_dict,
    state_to_json_dict,
    tail_probability,
    tensor,
    total_photons,
    trace_distance,
)
from .smp import (
    ErrorReport,
    FockOutcomeReferee,
    FunctionTable,
    IdentityCode,
    InterferenceVacuumReferee,
    RepetitionCode,
    SmpProtocol,
    XorFoldCode,
    apply_beamsplitter,
    beamsplitter_pair,
    bruteforce_deterministic_cc,
    coherent_accept_probability,
    coherent_fingerprint_protocol,
    deterministic_cc_matrix,
    equality_function,
    evaluate_error,
    load_protocol,
    trivial_classical_protocol,
)
from .truncation import (
    TruncationSpec,
    check_gentle_measurement,
    check_projector_closeness,
    markov_cutoff,
    perturbed_error_bound,
    project_below_cutoff,
    retained_weight,
    transform_protocol,
)
from .verify import SUITES, SuiteResult, run_suites

__version__ = "0.1.0"

__all__ = [
    "BasisMismatchError",
    "ComplexityReference",
    "ConfigError",
    "DenseOperator",
    "DimensionCapError",
    "ErrorReport",
    "FockDiagonalState",
    "FockOutcomeReferee",
    "FunctionTable",
    "IdentityCode",
    "InterferenceVacuumReferee",
    "LogRankBounds",
    "ModeMismatchError",
    "NormalizationError",
    "OptSmpError",
    "PremiseViolationError",
    "ProductPureState",
    "PureState",
    "RankCount",
    "RepetitionCode",
    "ReportPoint",
    "SUITES",
    "SmpProtocol",
    "SuiteResult",
    "SupportCapError",
    "TradeoffRow",
    "TruncationSpec",
    "VacuousTruncationError",
    "XorFoldCode",
    "apply_beamsplitter",
    "beamsplitter_pair",
    "binary_entropy",
    "binomial_power_bound",
    "bruteforce_deterministic_cc",
    "build_report",
    "check_gentle_measurement",
    "check_projector_closeness",
    "classical_tradeoff_lhs",
    "coherent_accept_probability",
    "coherent_fingerprint_protocol",
    "coherent_state",
    "count_rank",
    "cutoff_for_tail",
    "default_references",
    "deterministic_cc_matrix",
    "entropy_bound",
    "entropy_profile",
    "equality_function",
    "equality_reference",
    "evaluate_error",
    "fidelity",
    "iter_occupations",
    "load_protocol",
    "log_rank_bounds",
    "markov_cutoff",
    "markov_photon_cutoff",
    "mean_photon_number",
    "overlap",
    "perturbed_error_bound",
    "photon_number_distribution",
    "poisson_tail",
    "project_below_cutoff",
    "qfp_report_points",
    "quantum_tradeoff_lhs",
    "retained_weight",
    "run_suites",
    "state_from_json_dict",
    "state_to_json_dict",
    "tail_probability",
    "tensor",
    "total_photons",
    "trace_distance",
    "trivial_classical_protocol",
    "transform_protocol",
]
