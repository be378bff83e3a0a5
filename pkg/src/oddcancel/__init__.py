"""Exact q-series engine for odd-dimensional anomaly cancellation formulas."""

from .bundles import BundleContext, NamedClasses, crosscheck, expand_theta_bundle
from .errors import (
    CertificationError,
    ConfigurationError,
    ModularityViolation,
    OddCancelError,
    PrecisionError,
    VerificationFailure,
)
from .modular import (
    FormulaReport,
    basis_expansions,
    derive,
    emit_identities,
    printed_check,
    solve_h,
    solve_h_twisted,
    two_adic_exponent,
)
from .phi import GeometrySpec, PhiKind, build_phi, top_slice
from .prefactor import PowerOfTwo
from .rings import GradedPoly, QSeries, Ring
from .theta import delta_eps, log_block

__all__ = [
    "BundleContext", "NamedClasses", "crosscheck", "expand_theta_bundle",
    "CertificationError", "ConfigurationError", "ModularityViolation", "OddCancelError",
    "PrecisionError", "VerificationFailure",
    "FormulaReport", "basis_expansions", "derive", "emit_identities", "printed_check",
    "solve_h", "solve_h_twisted", "two_adic_exponent",
    "GeometrySpec", "PhiKind", "build_phi", "top_slice", "PowerOfTwo",
    "GradedPoly", "QSeries", "Ring", "delta_eps", "log_block",
]
