"""Exact finite-difference calculus and extension certificates for Frechet's equation."""

from .arith import (
    INFINITY,
    PAdicContext,
    PAdicView,
    QuadraticElement,
    abs_p,
    ball_contains,
    digit_expansion,
    format_rational,
    parse_rational,
    ultrametric_dominance,
    valuation,
)
from .differences import (
    FormalFunctional,
    czerwik_identity_check,
    equal_step_difference,
    forward_difference,
    functional_expansion,
    mixed_difference,
    permutation_invariance_check,
    reflection_identity_check,
)
from .extension import (
    ExtensionCertificate,
    FullSpace,
    HypothesisDomain,
    PAdicBallComplement,
    RealOpenInterval,
    equal_step_extension_certificate,
    mixed_extension_certificate,
    padic_order1_certificate,
    real_order1_certificate,
    telescoping_padic_certificate,
    verify_certificate,
)
from .functions import BallIndicatorFn, ClassPiecewiseFn, PolynomialFn, TabulatedFn
from .interpolation import (
    DensePolynomial,
    lagrange_interpolate,
    local_reconstruct,
    propagation_check,
    refinement_consistency,
)

__version__ = "0.1.0"
