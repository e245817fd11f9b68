"""The eight confidence intervals for a binomial proportion.

Every constructor takes a :class:`SampleSummary` and a :class:`ConfidenceSpec`
and returns an immutable :class:`Interval`. Test-inversion intervals
(Clopper-Pearson, mid-p, Stevens, likelihood ratio) locate their endpoints
with :func:`binomci.numerics.find_root`; when a defining equation has no
root inside (0, 1) the endpoint is clamped to 0 or 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from binomci.numerics import (
    Bracket,
    DomainError,
    beta_quantile,
    binomial_cdf,
    binomial_pmf,
    binomial_sf,
    find_root,
    normal_quantile,
)

# endpoints are solved far below the 1e-10 contract so that residuals of the
# defining equations stay at rounding level
ENDPOINT_TOL = 1e-15


class UsageError(ValueError):
    """A call combined arguments that make no sense together."""


class Method(enum.Enum):
    WALD = "wald"
    WILSON = "wilson"
    AGRESTI_COULL = "agresti_coull"
    CLOPPER_PEARSON = "clopper_pearson"
    MID_P = "mid_p"
    JEFFREYS = "jeffreys"
    LIKELIHOOD_RATIO = "likelihood_ratio"
    STEVENS = "stevens"

    @property
    def randomized(self) -> bool:
        return self is Method.STEVENS

    @classmethod
    def parse(cls, name: str) -> "Method":
        try:
            return cls(name.strip().lower())
        except ValueError:
            known = ", ".join(m.value for m in cls)
            raise UsageError(f"unknown method {name!r} (expected one of: {known})") from None

    def __str__(self) -> str:
        return self.value


DETERMINISTIC_METHODS = tuple(m for m in Method if not m.randomized)


@dataclass(frozen=True)
class SampleSummary:
    n: int
    x: int

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        if isinstance(self.x, bool) or int(self.x) != self.x or not 0 <= self.x <= self.n:
            raise DomainError(f"x must be an integer in 0..{self.n}, got {self.x!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "x", int(self.x))

    @property
    def p_hat(self) -> float:
        return self.x / self.n

    @property
    def q_hat(self) -> float:
        return 1.0 - self.p_hat


@dataclass(frozen=True)
class ConfidenceSpec:
    """Two-sided miscoverage ``alpha`` and critical value ``kappa``.

    ``kappa`` defaults to the exact normal quantile z(1 - alpha/2); pass it
    explicitly (e.g. ``kappa=2``) to reproduce textbook shortcuts.
    """

    alpha: float = 0.05
    kappa: Optional[float] = None

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if self.kappa is None:
            object.__setattr__(self, "kappa", normal_quantile(1.0 - self.alpha / 2.0))
        elif not (math.isfinite(self.kappa) and self.kappa > 0.0):
            raise DomainError(f"kappa must be a positive number, got {self.kappa!r}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "kappa", float(self.kappa))

    @property
    def level(self) -> float:
        return 1.0 - self.alpha


@dataclass(frozen=True)
class Interval:
    lower: float
    upper: float
    method: Method
    sample: SampleSummary = field(repr=False)
    spec: ConfidenceSpec = field(repr=False)
    aux_u: Optional[float] = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.lower <= self.upper <= 1.0:
            raise ValueError(f"invalid interval [{self.lower}, {self.upper}] for {self.method}")
        if (self.aux_u is not None) != self.method.randomized:
            raise ValueError("aux_u must be set exactly for the Stevens interval")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, p: float) -> bool:
        return self.lower <= p <= self.upper

    def as_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "method": self.method.value,
            "n": self.sample.n,
            "x": self.sample.x,
            "alpha": self.spec.alpha,
            "kappa": self.spec.kappa,
            "u": self.aux_u,
        }


def _clip(v: float) -> float:
    return min(1.0, max(0.0, v))


def _make(lower: float, upper: float, method: Method, sample, spec, aux_u=None) -> Interval:
    return Interval(_clip(lower), _clip(upper), method, sample, spec, aux_u)


def wald(sample: SampleSummary, spec: ConfidenceSpec) -> Interval:
    """Standard Wald interval p_hat +/- kappa * sqrt(p_hat q_hat / n), clamped.

    No continuity correction; at x = 0 or x = n it collapses to a point.
    """
    p = sample.p_hat
    half = spec.kappa * math.sqrt(p * sample.q_hat / sample.n)
    return _make(p - half, p + half, Method.WALD, sample, spec)


def wilson(sample: SampleSummary, spec: ConfidenceSpec) -> Interval:
    """Score interval: the two roots of (p_hat - p)^2 = kappa^2 p (1 - p) / n."""
    n, k2 = sample.n, spec.kappa ** 2
    p = sample.p_hat
    denom = n + k2
    center = (sample.x + k2 / 2.0) / denom
    half = spec.kappa * math.sqrt(n) / denom * math.sqrt(p * sample.q_hat + k2 / (4.0 * n))
    lower, upper = center - half, center + half
    # the roots are exactly 0 and 1 at the boundaries; pin them against rounding
    if sample.x == 0:
        lower = 0.0
    if sample.x == n:
        upper = 1.0
    return _make(lower, upper, Method.WILSON, sample, spec)


def agresti_coull(sample: SampleSummary, spec: ConfidenceSpec) -> Interval:
    """Wald interval after adding kappa^2/2 successes and kappa^2/2 failures.

    With ``kappa=2`` this is the "+2 successes, +2 failures" rule.
    """
    k2 = spec.kappa ** 2
    n_tilde = sample.n + k2
    p_tilde = (sample.x + k2 / 2.0) / n_tilde
    half = spec.kappa * math.sqrt(p_tilde * (1.0 - p_tilde) / n_tilde)
    return _make(p_tilde - half, p_tilde + half, Method.AGRESTI_COULL, sample, spec)


def _upper_endpoint(tail: Callable[[float], float], target: float) -> float:
    """Root of the nonincreasing ``tail(p) = target``, clamped to [0, 1]."""
    objective = lambda p: tail(p) - target  # noqa: E731
    if objective(1.0) >= 0.0:
        return 1.0
    if objective(0.0) <= 0.0:
        return 0.0
    return find_root(objective, Bracket(0.0, 1.0), tol=ENDPOINT_TOL)


def _lower_endpoint(tail: Callable[[float], float], target: float) -> float:
    """Root of the nondecreasing ``tail(p) = target``, clamped to [0, 1]."""
    objective = lambda p: tail(p) - target  # noqa: E731
    if objective(0.0) >= 0.0:
        return 0.0
    if objective(1.0) <= 0.0:
        return 1.0
    return find_root(objective, Bracket(0.0, 1.0), tol=ENDPOINT_TOL)


def lower_tail_weighted(x: int, n: int, p: float, weight: float) -> float:
    """Pr(X <= x - 1) + weight * Pr(X = x); decreasing in p."""
    return binomial_cdf(x - 1, n, p) + weight * binomial_pmf(x, n, p)


def upper_tail_weighted(x: int, n: int, p: float, weight: float) -> float:
    """Pr(X >= x + 1) + weight * Pr(X = x); increasing in p."""
    return binomial_sf(x + 1, n, p) + weight * binomial_pmf(x, n, p)


def _randomized_test_interval(sample: SampleSummary, spec: ConfidenceSpec, u: float) -> tuple[float, float]:
    """Invert the X + U test: the observation's atom weighs u in the lower
    tail and 1 - u in the upper tail."""
    x, n, half_alpha = sample.x, sample.n, spec.alpha / 2.0
    upper = _upper_endpoint(lambda p: lower_tail_weighted(x, n, p, u), half_alpha)
    lower = _lower_endpoint(lambda p: upper_tail_weighted(x, n, p, 1.0 - u), half_alpha)
    return lower, upper


def clopper_pearson(sample: SampleSummary, spec: ConfidenceSpec) -> Interval:
    """Exact interval from Pr_p(X >= x) = alpha/2 and Pr_p(X <= x) = alpha/2.

    The lower bound is 0 when x = 0 and the upper bound is 1 when x = n.
    """
    x, n, half_alpha = sample.x, sample.n, spec.alpha / 2.0
    lower = 0.0 if x == 0 else _lower_endpoint(lambda p: binomial_sf(x, n, p), half_alpha)
    upper = 1.0 if x == n else _upper_endpoint(lambda p: binomial_cdf(x, n, p), half_alpha)
    return _make(lower, upper, Method.CLOPPER_PEARSON, sample, spec)


def mid_p(sample: SampleSummary, spec: ConfidenceSpec) -> Interval:
    """Clopper-Pearson with the observed outcome counted at half weight in each tail."""
    lower, upper = _randomized_test_interval(sample, spec, 0.5)
    return _make(lower, upper, Method.MID_P, sample, spec)


def stevens(sample: SampleSummary, spec: ConfidenceSpec, u: float) -> Interval:
    """Randomized interval based on the continuous statistic X + U.

    ``u`` is the realized uniform draw; ``u = 0.5`` reproduces :func:`mid_p`.
    """
    if not 0.0 <= u <= 1.0:
        raise DomainError(f"u must lie in [0, 1], got {u!r}")
    lower, upper = _randomized_test_interval(sample, spec, float(u))
    return _make(lower, upper, Method.STEVENS, sample, spec, aux_u=float(u))


def jeffreys(sample: SampleSummary, spec: ConfidenceSpec) -> Interval:
    """Equal-tailed posterior interval under the Beta(1/2, 1/2) prior."""
    x, n = sample.x, sample.n
    a, b = x + 0.5, n - x + 0.5
    lower = 0.0 if x == 0 else beta_quantile(spec.alpha / 2.0, a, b)
    upper = 1.0 if x == n else beta_quantile(1.0 - spec.alpha / 2.0, a, b)
    return _make(lower, upper, Method.JEFFREYS, sample, spec)


def log_likelihood(x: int, n: int, p: float) -> float:
    """x log p + (n - x) log(1 - p) with 0 log 0 = 0."""
    value = 0.0
    if x > 0:
        value += x * math.log(p) if p > 0.0 else -math.inf
    if x < n:
        value += (n - x) * math.log1p(-p) if p < 1.0 else -math.inf
    return value


def deviance(x: int, n: int, p: float) -> float:
    """Likelihood-ratio statistic 2 [l(p_hat) - l(p)]."""
    return 2.0 * (log_likelihood(x, n, x / n) - log_likelihood(x, n, p))


def likelihood_ratio(sample: SampleSummary, spec: ConfidenceSpec) -> Interval:
    """Set of p whose deviance does not exceed kappa^2."""
    x, n, k2 = sample.x, sample.n, spec.kappa ** 2
    p_hat = sample.p_hat
    objective = lambda p: deviance(x, n, p) - k2  # noqa: E731
    if x == 0:
        lower = 0.0
        upper = -math.expm1(-k2 / (2.0 * n))
    elif x == n:
        lower = math.exp(-k2 / (2.0 * n))
        upper = 1.0
    else:
        lower = find_root(objective, Bracket(0.0, p_hat), tol=ENDPOINT_TOL)
        upper = find_root(objective, Bracket(p_hat, 1.0), tol=ENDPOINT_TOL)
    return _make(lower, upper, Method.LIKELIHOOD_RATIO, sample, spec)


_CONSTRUCTORS = {
    Method.WALD: wald,
    Method.WILSON: wilson,
    Method.AGRESTI_COULL: agresti_coull,
    Method.CLOPPER_PEARSON: clopper_pearson,
    Method.MID_P: mid_p,
    Method.JEFFREYS: jeffreys,
    Method.LIKELIHOOD_RATIO: likelihood_ratio,
}


def draw_u(seed: int) -> float:
    """Uniform draw on [0, 1) from a PCG64 generator seeded with ``seed``."""
    return float(np.random.Generator(np.random.PCG64(seed)).random())


def compute(
    method: Method | str,
    sample: SampleSummary,
    spec: ConfidenceSpec,
    u: Optional[float] = None,
    seed: Optional[int] = None,
) -> Interval:
    """Dispatch to the constructor for ``method``.

    The Stevens interval needs a randomization value: ``u`` if given,
    otherwise one drawn from ``seed``. Other methods reject both.
    """
    if isinstance(method, str):
        method = Method.parse(method)
    if method is Method.STEVENS:
        if u is None:
            if seed is None:
                raise UsageError("the stevens interval needs either u or seed")
            u = draw_u(seed)
        return stevens(sample, spec, u)
    if u is not None or seed is not None:
        raise UsageError(f"u and seed only apply to the stevens interval, not {method.value}")
    return _CONSTRUCTORS[method](sample, spec)
