"""Multipartite entanglement-structure detection for small quantum systems.

Builds skew-information sums of collective observables and compares them
against closed-form bounds that every k-separable or k-producible state
obeys; violations certify k-nonseparability or (k+1)-partite entanglement.
"""

from .matrices import (
    QuantumState,
    ValidationError,
    eigendecompose,
    embed,
    extreme_eigenvalues,
    identity,
    kron,
    partial_trace,
    require_hermitian,
)
from .skew import NEG_INF, power_mean, skew_information, validate_order, variance
from .observables import (
    CollectiveObservable,
    LocalBasis,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    WeightedObservableSpec,
    aligned_padded_basis,
    build_weighted,
    collective_pauli_spec,
    collective_set,
    gellmann_basis,
    padded_basis,
    site_operator_range,
    weighted_spec,
)
from .criteria import (
    CriterionReport,
    Mode,
    VIOLATION_MARGIN,
    bound_P,
    bound_S,
    bound_gamma,
    prop1_evaluate,
    prop1_lhs,
    prop2_bound,
    prop2_evaluate,
    prop2_lhs,
)
from .states import (
    StateSpecError,
    compile_family,
    dicke,
    evaluate_state_spec,
    ghz,
    ghz_phase,
    haar_ket,
    noisy_mix,
    parse_state_spec,
    product_bits,
    random_density,
    random_k_producible,
    random_k_separable,
    white,
)
from .scan import (
    CriterionConfig,
    DICKE_NOISE_TEMPLATE,
    GHZ_NOISE_TEMPLATE,
    RegionGrid,
    ThresholdResult,
    family_threshold,
    region_nesting_ok,
    region_scan,
    region_to_csv,
    table_producible,
    table_separable,
    threshold_scan,
)
from .selftest import run_selftest

__version__ = "0.1.0"

__all__ = [
    "QuantumState",
    "ValidationError",
    "eigendecompose",
    "embed",
    "extreme_eigenvalues",
    "identity",
    "kron",
    "partial_trace",
    "require_hermitian",
    "NEG_INF",
    "power_mean",
    "skew_information",
    "validate_order",
    "variance",
    "CollectiveObservable",
    "LocalBasis",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "WeightedObservableSpec",
    "aligned_padded_basis",
    "build_weighted",
    "collective_pauli_spec",
    "collective_set",
    "gellmann_basis",
    "padded_basis",
    "site_operator_range",
    "weighted_spec",
    "CriterionReport",
    "Mode",
    "VIOLATION_MARGIN",
    "bound_P",
    "bound_S",
    "bound_gamma",
    "prop1_evaluate",
    "prop1_lhs",
    "prop2_bound",
    "prop2_evaluate",
    "prop2_lhs",
    "StateSpecError",
    "compile_family",
    "dicke",
    "evaluate_state_spec",
    "ghz",
    "ghz_phase",
    "haar_ket",
    "noisy_mix",
    "parse_state_spec",
    "product_bits",
    "random_density",
    "random_k_producible",
    "random_k_separable",
    "white",
    "CriterionConfig",
    "DICKE_NOISE_TEMPLATE",
    "GHZ_NOISE_TEMPLATE",
    "RegionGrid",
    "ThresholdResult",
    "family_threshold",
    "region_nesting_ok",
    "region_scan",
    "region_to_csv",
    "table_producible",
    "table_separable",
    "threshold_scan",
    "run_selftest",
]
