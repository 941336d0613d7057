"""aos: numerical verification of almost-orthogonal sequence inequalities.

Build Gram operators of test sequences in weighted L² probability spaces,
certify the Schur row-sum constant with analytic tails, and verify the
generalized Bessel inequality and the constructive Riesz-Fischer analogue
across a catalog of Gaussian, Gamma, Beta and Dirichlet-series cases.
"""

__version__ = "0.1.0"

from .errors import (
    AosError,
    DomainError,
    InvalidParameterError,
    NumericalInconsistencyError,
    PoleError,
    ToleranceNotMetError,
    UnknownCaseError,
    UnsupportedModeError,
)
from .quadrature import (
    QuadratureRule,
    TailCertificate,
    gauss_hermite_rule,
    log_axis_rule,
    sum_with_tail,
    tanh_sinh_rule,
)
from .spaces import (
    FrequencySchedule,
    SequenceFamily,
    TestFunction,
    WeightedMeasure,
    coefficient,
    gram_entry,
    inner_product,
    make_family,
    make_space,
    norm_sq,
    validate_schedule,
)
from .operator import (
    BesselReport,
    CompactnessDiagnostics,
    GramMatrix,
    RieszFischerReport,
    SchurEstimate,
    bessel_verify,
    build_gram,
    compactness_diagnostics,
    min_eigenvalue,
    operator_norm,
    riesz_fischer,
    schur_constant,
)
from .catalog import instantiate, list_cases, run_case

__all__ = [
    "AosError", "DomainError", "InvalidParameterError",
    "NumericalInconsistencyError", "PoleError", "ToleranceNotMetError",
    "UnknownCaseError", "UnsupportedModeError",
    "QuadratureRule", "TailCertificate", "gauss_hermite_rule",
    "log_axis_rule", "sum_with_tail", "tanh_sinh_rule",
    "FrequencySchedule", "SequenceFamily", "TestFunction", "WeightedMeasure",
    "coefficient", "gram_entry", "inner_product", "make_family", "make_space",
    "norm_sq", "validate_schedule",
    "BesselReport", "CompactnessDiagnostics", "GramMatrix",
    "RieszFischerReport", "SchurEstimate", "bessel_verify", "build_gram",
    "compactness_diagnostics", "min_eigenvalue", "operator_norm",
    "riesz_fischer", "schur_constant",
    "instantiate", "list_cases", "run_case",
]
