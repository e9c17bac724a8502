"""Correlation structure of few-qubit quantum states.

Splits the total correlations of a three-qubit state into classical and
quantum parts and into bipartite and genuinely tripartite parts, with exact
closed forms on pure states, measurement optimizers for mixed inputs, a
Monte-Carlo verification harness, and a CLI.
"""

from .errors import (
    InternalInvariantError,
    ParseError,
    QcorrError,
    UnsupportedInputError,
    ValidationError,
)
from .qstate import (
    DensityMatrix,
    PureState,
    Spectrum,
    binary_entropy,
    density_of,
    eig_hermitian,
    haar_random_pure,
    load_state,
    parse_state_json,
    partial_trace,
    permute_parties,
    random_mixed_state,
    relative_entropy,
    state_to_json,
    von_neumann_entropy,
)
from .bipartite import (
    DirectionalResult,
    MeasurementBasis,
    classical_correlation_directional,
    concurrence,
    conditional_entropy_measured,
    discord_directional,
    eof_from_concurrence,
    koashi_winter_classical,
    koashi_winter_discord,
    load_matrix,
    matrix_to_json,
    mutual_information,
    one_to_rest_concurrence,
    parse_matrix_json,
    symmetrized_classical,
    symmetrized_discord,
    to_pure,
)
from .tripartite import (
    AcinForm,
    CorrelationReport,
    PartyOrdering,
    acin_state,
    bipartite_parts_pure,
    canonical_ordering,
    correlation_report,
    double_conditional_entropy,
    family_ghz_tilde,
    family_w_tilde,
    find_discord_crossover,
    genuine_classical,
    genuine_discord,
    genuine_qc_n,
    genuine_total,
    genuine_total_n,
    genuine_total_via_relative_entropy,
    ghz_state,
    min_double_conditional_entropy,
    sweep_families,
    three_tangle,
    total_classical_mixed,
    total_classical_pure,
    total_discord_pure,
    total_information,
    w_state,
)
from .verify import (
    N_PARTY_CHECKS,
    PropertyCheck,
    THREE_QUBIT_CHECKS,
    ViolationReport,
    evaluate_sample,
    explore_pairwise_order_n,
    oracle_crosscheck,
    run_suite,
    sub_seed,
)

__version__ = "0.1.0"

__all__ = [
    "AcinForm",
    "CorrelationReport",
    "DensityMatrix",
    "DirectionalResult",
    "InternalInvariantError",
    "MeasurementBasis",
    "N_PARTY_CHECKS",
    "ParseError",
    "PartyOrdering",
    "PropertyCheck",
    "PureState",
    "QcorrError",
    "Spectrum",
    "THREE_QUBIT_CHECKS",
    "UnsupportedInputError",
    "ValidationError",
    "ViolationReport",
    "acin_state",
    "binary_entropy",
    "bipartite_parts_pure",
    "canonical_ordering",
    "classical_correlation_directional",
    "concurrence",
    "conditional_entropy_measured",
    "correlation_report",
    "density_of",
    "discord_directional",
    "double_conditional_entropy",
    "eig_hermitian",
    "eof_from_concurrence",
    "evaluate_sample",
    "explore_pairwise_order_n",
    "family_ghz_tilde",
    "family_w_tilde",
    "find_discord_crossover",
    "genuine_classical",
    "genuine_discord",
    "genuine_qc_n",
    "genuine_total",
    "genuine_total_n",
    "genuine_total_via_relative_entropy",
    "ghz_state",
    "haar_random_pure",
    "koashi_winter_classical",
    "koashi_winter_discord",
    "load_matrix",
    "load_state",
    "matrix_to_json",
    "min_double_conditional_entropy",
    "mutual_information",
    "one_to_rest_concurrence",
    "oracle_crosscheck",
    "parse_matrix_json",
    "parse_state_json",
    "partial_trace",
    "permute_parties",
    "random_mixed_state",
    "relative_entropy",
    "run_suite",
    "state_to_json",
    "sub_seed",
    "sweep_families",
    "symmetrized_classical",
    "symmetrized_discord",
    "three_tangle",
    "to_pure",
    "total_classical_mixed",
    "total_classical_pure",
    "total_discord_pure",
    "total_information",
    "von_neumann_entropy",
    "w_state",
]
