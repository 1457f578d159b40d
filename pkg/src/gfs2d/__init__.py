"""Completeness, minimality and biorthogonal duals of weighted double trigonometric systems on the torus."""

__version__ = "0.1.0"

from .core import (
    ColumnZ,
    ColumnZ0,
    FreqIndex,
    GFSError,
    InvalidPhase,
    LebesgueExponent,
    NoLineSingularity,
    NotMinimal,
    PatternMismatch,
    Point,
    Singularity,
    SingularNode,
    TorusGrid,
    UnsupportedExponent,
    UnsupportedSingularity,
    WitnessMismatch,
    conjugate_exponent,
    modulate_pattern,
    omega_contains,
    window_indices,
)
from .weights import (
    ConstantPhase,
    ConstantWeight,
    ExampleSum,
    ExampleX,
    FirstHarmonic,
    TabulatedPhase,
    TabulatedWeight,
    check_upsilon,
    eval_weight,
    load_weight_csv,
    suggest_phase,
)
from .quadrature import (
    ImproperVerdict,
    QuadratureConfig,
    Status,
    classify_improper,
    holder_sides,
    integrate_periodic_1d,
    integrate_torus_2d,
    lp_norm,
    marginal_u,
    marginal_v,
)
from .classifier import (
    PhasePairWitness,
    PhaseWitness,
    PointWitness,
    Tri,
    Verdict,
    check_c0,
    check_strong_x_singularity,
    check_xP_singularity,
    classify,
    classify_column0_case,
    classify_column_case,
    classify_point_case,
    project_annihilator,
)
from .dual import DualSystem, build_dual, verify_biorthogonality, verify_recurrence
from .gfs import (
    CoefficientTable,
    SpanFunction,
    TabulatedFunction,
    gfs_coefficients,
    gfs_coefficients_many,
    partial_sum,
    reconstruction_error,
)

__all__ = [
    "CoefficientTable",
    "ColumnZ",
    "ColumnZ0",
    "ConstantPhase",
    "ConstantWeight",
    "DualSystem",
    "ExampleSum",
    "ExampleX",
    "FirstHarmonic",
    "FreqIndex",
    "GFSError",
    "ImproperVerdict",
    "InvalidPhase",
    "LebesgueExponent",
    "NoLineSingularity",
    "NotMinimal",
    "PatternMismatch",
    "PhasePairWitness",
    "PhaseWitness",
    "Point",
    "PointWitness",
    "QuadratureConfig",
    "SingularNode",
    "Singularity",
    "SpanFunction",
    "TabulatedFunction",
    "Status",
    "TabulatedPhase",
    "TabulatedWeight",
    "TorusGrid",
    "Tri",
    "UnsupportedExponent",
    "UnsupportedSingularity",
    "Verdict",
    "WitnessMismatch",
    "build_dual",
    "check_c0",
    "check_strong_x_singularity",
    "check_upsilon",
    "check_xP_singularity",
    "classify",
    "classify_column0_case",
    "classify_column_case",
    "classify_improper",
    "classify_point_case",
    "conjugate_exponent",
    "eval_weight",
    "gfs_coefficients",
    "gfs_coefficients_many",
    "holder_sides",
    "integrate_periodic_1d",
    "integrate_torus_2d",
    "load_weight_csv",
    "lp_norm",
    "marginal_u",
    "marginal_v",
    "modulate_pattern",
    "omega_contains",
    "partial_sum",
    "project_annihilator",
    "reconstruction_error",
    "suggest_phase",
    "verify_biorthogonality",
    "verify_recurrence",
    "window_indices",
    "__version__",
]
