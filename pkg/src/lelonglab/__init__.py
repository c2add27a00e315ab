"""Masses and Lelong numbers of directed harmonic currents near a
linearizable foliation singularity on the unit bidisc.

Two independent computation routes (adaptive quadrature along leaves and
closed forms for periodic data) plus a verification corpus that checks the
qualitative trichotomy: positive limit for positive eigenvalues, vanishing
limit for negative periodic data, divergence under linear boundary growth.
"""

from .errors import (
    DomainError,
    EmptyLeafError,
    InputError,
    InvalidSpecError,
    LelongLabError,
    NormalizationError,
    QuadratureFailure,
    UnsupportedCurrentError,
)
from .foliation import (
    Eigenvalue,
    LeafDomain,
    LeafPoint,
    coordinate_shift,
    equivalent,
    jacobian_density,
    leaf_domain,
    monodromy,
    psi,
    torus_curve,
)
from .harmonic import (
    FourierSpec,
    PoissonSpec,
    boundary_integral,
    boundary_value,
    check_positivity,
    evaluate,
    laplacian_residual,
    normalize,
    spec_from_json,
    spec_to_json,
    translate,
    verify_monodromy_relation,
    window_integral,
    window_model_error,
)
from .current import (
    Current,
    TransversalAtom,
    accumulation_family,
    build_current,
    current_from_json,
    current_to_json,
    eigenvalue_from_json,
    eigenvalue_to_json,
    is_periodic,
    monodromy_family,
    total_weight,
)
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate
from .mass import (
    LelongEstimate,
    MassResult,
    boundary_reduction_check,
    closed_form_applicable,
    ia,
    ib,
    interval_window,
    kernel_weight,
    lelong_estimate,
    lelong_to_json,
    lower_bound_nonperiodic,
    mass_closed_form,
    mass_closed_form_negative_periodic,
    mass_closed_form_positive_periodic,
    mass_quadrature,
    nu_limit_positive_periodic,
)
from .theorems import (
    CorpusCase,
    VerificationReport,
    VerifyConfig,
    corpus,
    report_to_json,
    run_corpus,
    verify_b0_divergence,
    verify_lemma_bounds,
    verify_negative_periodic,
    verify_positive_lambda,
)

__version__ = "0.1.0"

__all__ = [
    "Current",
    "CorpusCase",
    "DEFAULT_CONFIG",
    "DomainError",
    "Eigenvalue",
    "EmptyLeafError",
    "FourierSpec",
    "InputError",
    "InvalidSpecError",
    "LeafDomain",
    "LeafPoint",
    "LelongEstimate",
    "LelongLabError",
    "MassResult",
    "NormalizationError",
    "PoissonSpec",
    "QuadratureConfig",
    "QuadratureFailure",
    "TransversalAtom",
    "UnsupportedCurrentError",
    "VerificationReport",
    "VerifyConfig",
    "accumulation_family",
    "boundary_integral",
    "boundary_reduction_check",
    "boundary_value",
    "build_current",
    "check_positivity",
    "closed_form_applicable",
    "coordinate_shift",
    "corpus",
    "current_from_json",
    "current_to_json",
    "eigenvalue_from_json",
    "eigenvalue_to_json",
    "equivalent",
    "evaluate",
    "ia",
    "ib",
    "integrate",
    "interval_window",
    "is_periodic",
    "jacobian_density",
    "kernel_weight",
    "laplacian_residual",
    "leaf_domain",
    "lelong_estimate",
    "lelong_to_json",
    "lower_bound_nonperiodic",
    "mass_closed_form",
    "mass_closed_form_negative_periodic",
    "mass_closed_form_positive_periodic",
    "mass_quadrature",
    "monodromy",
    "monodromy_family",
    "normalize",
    "nu_limit_positive_periodic",
    "psi",
    "report_to_json",
    "run_corpus",
    "spec_from_json",
    "spec_to_json",
    "torus_curve",
    "total_weight",
    "translate",
    "verify_b0_divergence",
    "verify_lemma_bounds",
    "verify_monodromy_relation",
    "verify_negative_periodic",
    "verify_positive_lambda",
    "window_integral",
    "window_model_error",
]
