"""Finite-dimensional models of polynomially bounded operator groups."""

from .spectral import (ClosedRealSet, ExponentialGrowthError, MatrixGenerator,
                       OpGroupError, PreconditionError, SingularityError,
                       SpectralData, SpectralResolutionError, Subspace,
                       format_matrix_text, jordan_matrix, parse_matrix_text)
from .ops import (CarlemanTransform, D_op, MembershipEvidence, MembershipResult,
                  PairingResult, TestFunction, beta_test_points,
                  bounded_membership, carleman_quadrature, d_apply_grid,
                  d_matrix, d_op_factored, default_alphas,
                  distribution_pairing, group_at, growth_exponent,
                  limit_membership, local_spectrum, membership_suite_vectors,
                  poisson_identity_selfadjoint, range_power,
                  ranges_intersection, resolvent, spectral_subspace,
                  triangular_group, worker_count)

__all__ = [
    "ClosedRealSet", "ExponentialGrowthError", "MatrixGenerator",
    "OpGroupError", "PreconditionError", "SingularityError", "SpectralData",
    "SpectralResolutionError", "Subspace", "format_matrix_text",
    "jordan_matrix", "parse_matrix_text",
    "CarlemanTransform", "D_op", "MembershipEvidence", "MembershipResult",
    "PairingResult", "TestFunction", "beta_test_points", "bounded_membership",
    "carleman_quadrature", "d_apply_grid", "d_matrix", "d_op_factored",
    "default_alphas", "distribution_pairing", "group_at", "growth_exponent",
    "limit_membership", "local_spectrum", "membership_suite_vectors",
    "poisson_identity_selfadjoint", "range_power", "ranges_intersection",
    "resolvent", "spectral_subspace", "triangular_group", "worker_count",
]
