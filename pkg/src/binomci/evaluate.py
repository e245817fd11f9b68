"""Exact, enumeration-based evaluation of interval methods.

For a fixed (method, n, spec) the interval depends only on the observed
count, so each sweep builds the k-indexed endpoint table once and reuses it
for every p on the grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from binomci.intervals import (
    ConfidenceSpec,
    Method,
    SampleSummary,
    UsageError,
    compute,
    lower_tail_weighted,
    stevens,
    upper_tail_weighted,
)
from binomci.numerics import DomainError, binomial_cdf, binomial_pmf, binomial_sf

DEFAULT_QUAD_POINTS = 16
DEFAULT_WINDOW = 0.05
DEFAULT_GRID_DENSITY = 201


class EvalPoint(NamedTuple):
    p: float
    value: float


@dataclass(frozen=True)
class Grid:
    """``count`` equally spaced points from ``start`` to ``stop`` inclusive."""

    start: float
    stop: float
    count: int

    def __post_init__(self) -> None:
        if int(self.count) != self.count or self.count < 1:
            raise DomainError(f"grid count must be a positive integer, got {self.count!r}")
        if not 0.0 < self.start <= self.stop < 1.0:
            raise DomainError(f"grid must satisfy 0 < start <= stop < 1, got {self.start}..{self.stop}")
        if self.count == 1 and self.start != self.stop:
            raise DomainError("a single-point grid needs start == stop")

    @classmethod
    def parse(cls, text: str) -> "Grid":
        """Parse ``start:stop:count``."""
        parts = text.split(":")
        if len(parts) != 3:
            raise DomainError(f"grid must look like start:stop:count, got {text!r}")
        try:
            return cls(float(parts[0]), float(parts[1]), int(parts[2]))
        except ValueError as exc:
            raise DomainError(f"bad grid {text!r}: {exc}") from None

    def points(self) -> np.ndarray:
        if self.count == 1:
            return np.array([float(self.start)])
        return np.linspace(self.start, self.stop, int(self.count))


class WaldMoment(NamedTuple):
    exact_conditional: float
    approx: float


class MonteCarloResult(NamedTuple):
    estimate: float
    std_error: float


def _as_method(method: Method | str) -> Method:
    return Method.parse(method) if isinstance(method, str) else method


# ---------------------------------------------------------------------------
# binomial probabilities on a grid


@lru_cache(maxsize=64)
def _log_binom_coefs(n: int) -> np.ndarray:
    k = np.arange(n + 1)
    lg = np.array([math.lgamma(i + 1.0) for i in range(n + 1)])
    return lg[n] - lg[k] - lg[n - k]


def pmf_matrix(n: int, ps: np.ndarray) -> np.ndarray:
    """Pr_p(X = k) for every p in ``ps`` (rows) and k = 0..n (columns)."""
    ps = np.atleast_1d(np.asarray(ps, dtype=float))
    if np.any((ps <= 0.0) | (ps >= 1.0)):
        raise DomainError("p must lie strictly inside (0, 1)")
    k = np.arange(n + 1)
    log_pmf = (
        _log_binom_coefs(n)[None, :]
        + k[None, :] * np.log(ps)[:, None]
        + (n - k)[None, :] * np.log1p(-ps)[:, None]
    )
    return np.exp(log_pmf)


# ---------------------------------------------------------------------------
# endpoint tables


@lru_cache(maxsize=256)
def endpoint_table(method: Method, n: int, spec: ConfidenceSpec) -> tuple[np.ndarray, np.ndarray]:
    """Lower and upper endpoints for x = 0..n of a deterministic method."""
    if method.randomized:
        raise UsageError("the stevens interval has no fixed endpoint table; use stevens_table")
    intervals = [compute(method, SampleSummary(n, x), spec) for x in range(n + 1)]
    lower = np.array([iv.lower for iv in intervals])
    upper = np.array([iv.upper for iv in intervals])
    lower.flags.writeable = False
    upper.flags.writeable = False
    return lower, upper


@lru_cache(maxsize=64)
def gauss_legendre_unit(quad_points: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to [0, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(quad_points)
    return 0.5 * (nodes + 1.0), 0.5 * weights


@lru_cache(maxsize=64)
def stevens_table(n: int, spec: ConfidenceSpec, quad_points: int = DEFAULT_QUAD_POINTS):
    """Stevens endpoints at every (x, u-node); arrays of shape (n + 1, quad_points)."""
    nodes, _ = gauss_legendre_unit(quad_points)
    lower = np.empty((n + 1, quad_points))
    upper = np.empty((n + 1, quad_points))
    for x in range(n + 1):
        sample = SampleSummary(n, x)
        for j, u in enumerate(nodes):
            iv = stevens(sample, spec, float(u))
            lower[x, j], upper[x, j] = iv.lower, iv.upper
    return lower, upper


# ---------------------------------------------------------------------------
# coverage


def _coverage_many(method: Method, n: int, spec: ConfidenceSpec, ps: np.ndarray) -> np.ndarray:
    ps = np.asarray(ps, dtype=float)
    if method.randomized:
        return np.array([stevens_exact_coverage(n, float(p), spec) for p in ps])
    lower, upper = endpoint_table(method, n, spec)
    covered = (lower[None, :] <= ps[:, None]) & (ps[:, None] <= upper[None, :])
    return np.sum(pmf_matrix(n, ps) * covered, axis=1)


def coverage_probability(method: Method | str, n: int, p: float, spec: ConfidenceSpec) -> float:
    """Exact Pr_p(lower(X) <= p <= upper(X)) for X ~ B(n, p)."""
    method = _as_method(method)
    if method.randomized:
        raise UsageError("coverage of the stevens interval is randomized; use stevens_exact_coverage")
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p!r}")
    return float(_coverage_many(method, n, spec, np.array([p]))[0])


def stevens_membership_measure(k: int, n: int, p: float, spec: ConfidenceSpec) -> float:
    """Lebesgue measure of the u in [0, 1] for which the Stevens interval at X = k covers p.

    p <= upper(k, u) iff u >= (alpha/2 - Pr(X <= k-1)) / Pr(X = k), and
    p >= lower(k, u) iff 1 - u >= (alpha/2 - Pr(X >= k+1)) / Pr(X = k).
    """
    atom = binomial_pmf(k, n, p)
    if atom == 0.0:
        return 0.0
    half_alpha = spec.alpha / 2.0
    u_min = (half_alpha - binomial_cdf(k - 1, n, p)) / atom
    u_max = 1.0 - (half_alpha - binomial_sf(k + 1, n, p)) / atom
    lo = min(1.0, max(0.0, u_min))
    hi = min(1.0, max(0.0, u_max))
    return max(0.0, hi - lo)


def stevens_exact_coverage(n: int, p: float, spec: ConfidenceSpec) -> float:
    """Coverage of the Stevens interval averaged over both X and U."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p!r}")
    total = 0.0
    for k in range(n + 1):
        measure = stevens_membership_measure(k, n, p, spec)
        if measure > 0.0:
            total += binomial_pmf(k, n, p) * measure
    return total


def coverage_curve(method: Method | str, n: int, spec: ConfidenceSpec, grid: Grid) -> list[EvalPoint]:
    method = _as_method(method)
    ps = grid.points()
    values = _coverage_many(method, n, spec, ps)
    return [EvalPoint(float(p), float(v)) for p, v in zip(ps, values)]


# ---------------------------------------------------------------------------
# expected length


def _length_many(method: Method, n: int, spec: ConfidenceSpec, ps: np.ndarray, quad_points: int) -> np.ndarray:
    if method.randomized:
        lower, upper = stevens_table(n, spec, quad_points)
        _, weights = gauss_legendre_unit(quad_points)
        widths = (upper - lower) @ weights
    else:
        lower, upper = endpoint_table(method, n, spec)
        widths = upper - lower
    return pmf_matrix(n, ps) @ widths


def expected_length(
    method: Method | str,
    n: int,
    p: float,
    spec: ConfidenceSpec,
    quad_points: int = DEFAULT_QUAD_POINTS,
) -> float:
    """E_p[upper(X) - lower(X)]; for Stevens the width is also averaged over U
    by Gauss-Legendre quadrature with ``quad_points`` nodes."""
    method = _as_method(method)
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p!r}")
    return float(_length_many(method, n, spec, np.array([p]), quad_points)[0])


def length_curve(
    method: Method | str,
    n: int,
    spec: ConfidenceSpec,
    grid: Grid,
    quad_points: int = DEFAULT_QUAD_POINTS,
) -> list[EvalPoint]:
    method = _as_method(method)
    ps = grid.points()
    values = _length_many(method, n, spec, ps, quad_points)
    return [EvalPoint(float(p), float(v)) for p, v in zip(ps, values)]


# ---------------------------------------------------------------------------
# bias and oscillation


def _window_points(p: float, window: float, grid_density: int) -> np.ndarray:
    lo, hi = p - window / 2.0, p + window / 2.0
    if not (window >= 0.0 and 0.0 < lo and hi < 1.0):
        raise DomainError(f"window [{lo}, {hi}] around p={p} must lie inside (0, 1)")
    if grid_density < 1:
        raise DomainError("grid_density must be positive")
    if grid_density == 1:
        return np.array([p])
    return np.linspace(lo, hi, grid_density)


def smoothed_bias(
    method: Method | str,
    n: int,
    spec: ConfidenceSpec,
    p: float,
    window: float = DEFAULT_WINDOW,
    grid_density: int = DEFAULT_GRID_DENSITY,
) -> float:
    """Moving average of coverage minus 1 - alpha over a window centred on p.

    Averaging over a window much wider than the ~1/n period of the
    oscillations leaves the systematic part of the coverage error.
    """
    method = _as_method(method)
    ps = _window_points(p, window, grid_density)
    return float(np.mean(_coverage_many(method, n, spec, ps)) - spec.level)


def bias_curve(
    method: Method | str,
    n: int,
    spec: ConfidenceSpec,
    grid: Grid,
    window: float = DEFAULT_WINDOW,
    grid_density: int = DEFAULT_GRID_DENSITY,
) -> list[EvalPoint]:
    return [
        EvalPoint(float(p), smoothed_bias(method, n, spec, float(p), window, grid_density))
        for p in grid.points()
    ]


def oscillation_amplitude(
    method: Method | str,
    n: int,
    spec: ConfidenceSpec,
    grid: Grid,
    window: float = DEFAULT_WINDOW,
    grid_density: int = DEFAULT_GRID_DENSITY,
) -> float:
    """Mean over the grid of |coverage(p) - (1 - alpha) - smoothed_bias(p)|."""
    method = _as_method(method)
    ps = grid.points()
    residuals = []
    for p in ps:
        coverage = _coverage_many(method, n, spec, np.array([p]))[0]
        bias = smoothed_bias(method, n, spec, float(p), window, grid_density)
        residuals.append(abs(coverage - spec.level - bias))
    return float(np.mean(residuals))


# ---------------------------------------------------------------------------
# diagnostics and Monte Carlo


def wald_moment_diagnostic(n: int, p: float) -> WaldMoment:
    """E[sqrt(n)(p_hat - p) / sqrt(p_hat q_hat) | 0 < X < n] next to
    (p - 1/2) / sqrt(n p q).

    The Wald statistic is undefined at X = 0 and X = n, so the exact moment
    is taken conditionally on the interior counts.
    """
    if n < 2:
        raise DomainError("the Wald moment needs n >= 2")
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p!r}")
    k = np.arange(1, n)
    weights = pmf_matrix(n, np.array([p]))[0, 1:n]
    p_hat = k / n
    stat = math.sqrt(n) * (p_hat - p) / np.sqrt(p_hat * (1.0 - p_hat))
    exact = float(np.sum(weights * stat) / np.sum(weights))
    approx = (p - 0.5) / math.sqrt(n * p * (1.0 - p))
    return WaldMoment(exact, approx)


def _stevens_covers(k: np.ndarray, u: np.ndarray, n: int, p: float, spec: ConfidenceSpec) -> np.ndarray:
    """Whether the Stevens interval at (k, u) covers p, decided by the test it inverts."""
    half_alpha = spec.alpha / 2.0
    lower_tail = np.array([binomial_cdf(j - 1, n, p) for j in range(n + 1)])
    upper_tail = np.array([binomial_sf(j + 1, n, p) for j in range(n + 1)])
    atom = np.array([binomial_pmf(j, n, p) for j in range(n + 1)])
    below_upper = lower_tail[k] + u * atom[k] >= half_alpha
    above_lower = upper_tail[k] + (1.0 - u) * atom[k] >= half_alpha
    return below_upper & above_lower


def monte_carlo_coverage(
    method: Method | str,
    n: int,
    p: float,
    spec: ConfidenceSpec,
    draws: int,
    seed: int,
) -> MonteCarloResult:
    """Simulated coverage from ``draws`` seeded binomial samples.

    Stevens draws also sample U; coverage of a draw is decided by whether
    the randomized test at p accepts, which is equivalent to interval
    membership and avoids one root search per draw.
    """
    method = _as_method(method)
    if draws < 1:
        raise DomainError("draws must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    xs = rng.binomial(n, p, size=draws)
    if method.randomized:
        us = rng.random(draws)
        hits = _stevens_covers(xs, us, n, p, spec)
    else:
        lower, upper = endpoint_table(method, n, spec)
        hits = (lower[xs] <= p) & (p <= upper[xs])
    estimate = float(np.mean(hits))
    return MonteCarloResult(estimate, math.sqrt(estimate * (1.0 - estimate) / draws))


def stevens_covers(k: int, u: float, n: int, p: float, spec: ConfidenceSpec) -> bool:
    return bool(_stevens_covers(np.array([k]), np.array([u]), n, p, spec)[0])


def sweep(methods: Iterable[Method], curve, *args, **kwargs) -> dict[Method, Sequence[EvalPoint]]:
    return {m: curve(m, *args, **kwargs) for m in methods}
