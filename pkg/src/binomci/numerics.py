"""Special functions and root finding for the interval constructions.

Binomial tails are summed directly in log space, starting from the term
nearest the mode and walking outward, so the Clopper-Pearson / mid-p path
never touches the incomplete beta code (the Jeffreys interval does).
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from statistics import NormalDist
from typing import Callable

EPS = sys.float_info.epsilon
ROOT_TOL = 1e-10
MAX_ITER = 200
_CF_MAX_ITER = 2000
_TINY = 1e-300

_STD_NORMAL = NormalDist()


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class BracketError(ValueError):
    """The objective does not change sign on the bracket."""


class ConvergenceError(RuntimeError):
    """An iterative method hit its iteration cap."""


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise BracketError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")


def _check_prob(p: float, name: str = "p") -> None:
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {p!r}")


_LN_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def log_binomial_coef(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def _stirlerr(n: int) -> float:
    """log(n!) - log(sqrt(2 pi n) (n/e)^n), the Stirling series remainder."""
    if n <= 15:
        return math.lgamma(n + 1.0) - (n + 0.5) * math.log(n) + n - _LN_SQRT_2PI
    nn = float(n) * n
    if n > 500:
        return (1 / 12 - (1 / 360) / nn) / n
    if n > 80:
        return (1 / 12 - (1 / 360 - (1 / 1260) / nn) / nn) / n
    if n > 35:
        return (1 / 12 - (1 / 360 - (1 / 1260 - (1 / 1680) / nn) / nn) / nn) / n
    return (1 / 12 - (1 / 360 - (1 / 1260 - (1 / 1680 - (1 / 1188) / nn) / nn) / nn) / nn) / n


def _bd0(x: float, m: float) -> float:
    """Deviance term x log(x/m) + m - x, computed without cancellation."""
    if abs(x - m) < 0.1 * (x + m):
        v = (x - m) / (x + m)
        s = (x - m) * v
        ej = 2 * x * v
        v *= v
        j = 1
        while True:
            ej *= v
            s1 = s + ej / (2 * j + 1)
            if s1 == s:
                return s1
            s = s1
            j += 1
    return x * math.log(x / m) + m - x


def log_binomial_pmf(k: int, n: int, p: float) -> float:
    """Natural log of Pr(X = k) for X ~ B(n, p), with 0 * log(0) = 0.

    Returns ``-inf`` when the probability is exactly zero (e.g. k > 0 at p = 0).
    """
    if n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if not 0 <= k <= n:
        raise DomainError(f"k must lie in 0..{n}, got {k!r}")
    _check_prob(p)
    if p == 0.0:
        return 0.0 if k == 0 else -math.inf
    if p == 1.0:
        return 0.0 if k == n else -math.inf
    # Loader's saddle-point form; avoids the cancellation of large log terms
    q = 1.0 - p
    if k == 0:
        return -_bd0(n, n * q) - n * p if p < 0.1 else n * math.log1p(-p)
    if k == n:
        return -_bd0(n, n * p) - n * q if q < 0.1 else n * math.log(p)
    lc = _stirlerr(n) - _stirlerr(k) - _stirlerr(n - k) - _bd0(k, n * p) - _bd0(n - k, n * q)
    return lc - 0.5 * (math.log(2.0 * math.pi) + math.log(k) + math.log1p(-k / n))


def _sum_pmf(lo: int, hi: int, n: int, p: float) -> float:
    """Sum Pr(X = k) for lo <= k <= hi, with 0 < p < 1 and 0 <= lo <= hi <= n.

    The walk starts at the term closest to the mode and moves away from it,
    so terms shrink monotonically and the loop can stop once they no longer
    register against the running total.
    """
    mode = min(n, int((n + 1) * p))
    start = min(max(mode, lo), hi)
    first = math.exp(log_binomial_pmf(start, n, p))
    total = first
    odds = p / (1.0 - p)

    term = first
    for k in range(start + 1, hi + 1):
        term *= (n - k + 1) / k * odds
        total += term
        if term <= total * 1e-17:
            break

    term = first
    for k in range(start, lo, -1):
        term *= k / (n - k + 1) / odds
        total += term
        if term <= total * 1e-17:
            break
    return total


def binomial_cdf(k: int, n: int, p: float) -> float:
    """Pr(X <= k) for X ~ B(n, p); ``k = -1`` gives 0 by convention."""
    _check_prob(p)
    if k < 0:
        return 0.0
    if k >= n:
        return 1.0
    if p == 0.0:
        return 1.0
    if p == 1.0:
        return 0.0
    if k < n * p:
        return min(1.0, _sum_pmf(0, k, n, p))
    return max(0.0, 1.0 - _sum_pmf(k + 1, n, n, p))


def binomial_sf(k: int, n: int, p: float) -> float:
    """Pr(X >= k) for X ~ B(n, p); 1 for k <= 0 and 0 for k > n."""
    _check_prob(p)
    if k <= 0:
        return 1.0
    if k > n:
        return 0.0
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0
    if k > n * p:
        return min(1.0, _sum_pmf(k, n, n, p))
    return max(0.0, 1.0 - _sum_pmf(0, k - 1, n, p))


def binomial_pmf(k: int, n: int, p: float) -> float:
    return math.exp(log_binomial_pmf(k, n, p))


def normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def normal_quantile(q: float) -> float:
    """Inverse standard normal CDF.

    Backed by :class:`statistics.NormalDist`, which implements Wichura's
    AS241 (PPND16) rational approximation, accurate to about 1e-16.
    """
    if not 0.0 < q < 1.0:
        raise DomainError(f"quantile level must lie in (0, 1), got {q!r}")
    return _STD_NORMAL.inv_cdf(q)


def _beta_cf(t: float, a: float, b: float) -> float:
    """Continued fraction for I_t(a, b), modified Lentz evaluation."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * t / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * t / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * t / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 4 * EPS:
            return h
    raise ConvergenceError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, t={t})")


def reg_inc_beta(t: float, a: float, b: float) -> float:
    """Regularized incomplete beta function I_t(a, b)."""
    if not (a > 0.0 and b > 0.0):
        raise DomainError(f"shape parameters must be positive, got a={a!r}, b={b!r}")
    _check_prob(t, "t")
    if t == 0.0:
        return 0.0
    if t == 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(t) + b * math.log1p(-t)
    )
    front = math.exp(log_front)
    if t < (a + 1.0) / (a + b + 2.0):
        return min(1.0, front * _beta_cf(t, a, b) / a)
    return max(0.0, 1.0 - front * _beta_cf(1.0 - t, b, a) / b)


def beta_quantile(q: float, a: float, b: float) -> float:
    """Inverse of :func:`reg_inc_beta` in its first argument."""
    if not 0.0 < q < 1.0:
        raise DomainError(f"quantile level must lie in (0, 1), got {q!r}")
    if not (a > 0.0 and b > 0.0):
        raise DomainError(f"shape parameters must be positive, got a={a!r}, b={b!r}")
    return find_root(lambda t: reg_inc_beta(t, a, b) - q, Bracket(0.0, 1.0), tol=0.0)


def find_root(
    objective: Callable[[float], float],
    bracket: Bracket,
    tol: float = ROOT_TOL,
    max_iter: int = MAX_ITER,
) -> float:
    """Brent's method on a sign-changing bracket.

    Inverse quadratic / secant steps are taken only while every function
    value involved is finite; otherwise the step falls back to bisection.
    The loop stops once the bracket is narrower than ``tol`` plus a few ulps
    of the current iterate, so ``tol=0`` asks for full machine precision.

    Raises:
        BracketError: the objective has the same strict sign at both ends.
        ConvergenceError: ``max_iter`` iterations did not shrink the bracket.
    """
    xpre, xcur = float(bracket.lo), float(bracket.hi)
    fpre, fcur = objective(xpre), objective(xcur)
    if math.isnan(fpre) or math.isnan(fcur):
        raise BracketError("objective is NaN at a bracket end")
    if fpre == 0.0:
        return xpre
    if fcur == 0.0:
        return xcur
    if (fpre > 0) == (fcur > 0):
        raise BracketError(
            f"no sign change on [{xpre}, {xcur}]: f(lo)={fpre!r}, f(hi)={fcur!r}"
        )

    xblk, fblk = 0.0, 0.0
    spre = scur = 0.0
    for _ in range(max_iter):
        if fpre != 0.0 and fcur != 0.0 and (fpre > 0) != (fcur > 0):
            xblk, fblk = xpre, fpre
            spre = scur = xcur - xpre
        if abs(fblk) < abs(fcur):
            xpre, xcur, xblk = xcur, xblk, xcur
            fpre, fcur, fblk = fcur, fblk, fcur

        delta = max((tol + 4 * EPS * abs(xcur)) / 2, _TINY)
        sbis = (xblk - xcur) / 2
        if fcur == 0.0 or abs(sbis) < delta:
            return xcur

        finite = math.isfinite(fpre) and math.isfinite(fcur) and math.isfinite(fblk)
        if finite and abs(spre) > delta and abs(fcur) < abs(fpre):
            if xpre == xblk:
                stry = -fcur * (xcur - xpre) / (fcur - fpre)
            else:
                dpre = (fpre - fcur) / (xpre - xcur)
                dblk = (fblk - fcur) / (xblk - xcur)
                stry = -fcur * (fblk * dblk - fpre * dpre) / (dblk * dpre * (fblk - fpre))
            if math.isfinite(stry) and 2 * abs(stry) < min(abs(spre), 3 * abs(sbis) - delta):
                spre, scur = scur, stry
            else:
                spre, scur = sbis, sbis
        else:
            spre, scur = sbis, sbis

        xpre, fpre = xcur, fcur
        if abs(scur) > delta:
            xcur += scur
        else:
            xcur += delta if sbis > 0 else -delta
        fcur = objective(xcur)
        if math.isnan(fcur):
            raise ConvergenceError(f"objective returned NaN at {xcur!r}")
    raise ConvergenceError(f"root finder exceeded {max_iter} iterations")
