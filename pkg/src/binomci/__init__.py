"""Confidence intervals for a binomial proportion, with exact coverage and
expected-length evaluation."""

from binomci.evaluate import (
    EvalPoint,
    Grid,
    coverage_curve,
    coverage_probability,
    expected_length,
    length_curve,
    monte_carlo_coverage,
    oscillation_amplitude,
    smoothed_bias,
    stevens_exact_coverage,
    wald_moment_diagnostic,
)
from binomci.intervals import (
    ConfidenceSpec,
    Interval,
    Method,
    SampleSummary,
    UsageError,
    agresti_coull,
    clopper_pearson,
    compute,
    jeffreys,
    likelihood_ratio,
    mid_p,
    stevens,
    wald,
    wilson,
)
from binomci.numerics import BracketError, ConvergenceError, DomainError

__version__ = "0.1.0"

__all__ = [
    "BracketError",
    "ConfidenceSpec",
    "ConvergenceError",
    "DomainError",
    "EvalPoint",
    "Grid",
    "Interval",
    "Method",
    "SampleSummary",
    "UsageError",
    "agresti_coull",
    "clopper_pearson",
    "compute",
    "coverage_curve",
    "coverage_probability",
    "expected_length",
    "jeffreys",
    "length_curve",
    "likelihood_ratio",
    "mid_p",
    "monte_carlo_coverage",
    "oscillation_amplitude",
    "smoothed_bias",
    "stevens",
    "stevens_exact_coverage",
    "wald",
    "wald_moment_diagnostic",
    "wilson",
]
