"""localzeta: singularity invariants of plane curves and the analytic
continuation regions of the local zeta functions they control.

The library computes, for a bivariate rational polynomial plus explicit flat
terms: Newton polygon data (the distance d and the height delta_0), the
real-branch multiplicity invariant mu_0 via Newton-Puiseux factorization, a
blowup-based almost resolution of singularities, candidate-pole reports for
the associated local zeta function, and desk-scale numeric probes of the
convergence/extension thresholds.
"""

from .arith import (
    Ball,
    BivariateFunction,
    BivariatePolynomial,
    FlatTail,
    FlatTerm,
    RealStatus,
    TruncatedSeries,
    certify_real,
    poly_substitute,
)
from .errors import (
    BudgetExceeded,
    FlatInput,
    IterationLimit,
    LocalZetaError,
    NonCompactFace,
    NonRealCenter,
    ParseError,
    PrecisionExhausted,
    SingularSample,
    TruncationUnderflow,
    UnresolvedRealness,
    VerificationFailed,
)
from .newton import (
    AdaptednessReport,
    FaceKind,
    FaceRef,
    NewtonPolygon,
    degeneracy_report,
    height_delta0,
    invariants_report,
    is_adapted,
    kappa_part,
    newton_distance,
    newton_polygon,
    principal_face,
)
from .puiseux import (
    Factorization,
    PuiseuxBranch,
    RealIndexSet,
    mu0,
    newton_puiseux,
    real_branch_indices,
)

__all__ = [
    "Ball",
    "BivariateFunction",
    "BivariatePolynomial",
    "FlatTail",
    "FlatTerm",
    "RealStatus",
    "TruncatedSeries",
    "certify_real",
    "poly_substitute",
    "newton_polygon",
    "newton_distance",
    "kappa_part",
    "degeneracy_report",
    "principal_face",
    "is_adapted",
    "height_delta0",
    "invariants_report",
    "NewtonPolygon",
    "FaceKind",
    "FaceRef",
    "AdaptednessReport",
    "newton_puiseux",
    "real_branch_indices",
    "mu0",
    "Factorization",
    "PuiseuxBranch",
    "RealIndexSet",
    "LocalZetaError",
    "ParseError",
    "FlatInput",
    "NonCompactFace",
    "TruncationUnderflow",
    "PrecisionExhausted",
    "UnresolvedRealness",
    "NonRealCenter",
    "VerificationFailed",
    "IterationLimit",
    "BudgetExceeded",
    "SingularSample",
]
