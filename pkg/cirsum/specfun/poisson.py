#!/usr/bin/env python3
"""
Poisson Weights and Tails
Log-space Poisson pmf windows, certified tail masses and tail quantiles
"""

import math

import numpy as np
from scipy import special

from ..error_handler import DomainError
from .normal import normal_upper_quantile

SUMMATION_LIMIT = 1.0e4


def _check_mean(mean: float):
    if not math.isfinite(mean) or mean < 0:
        raise DomainError(f"Poisson mean must be finite and >= 0, got {mean!r}")


def poisson_log_weights(mean: float, lo: int, hi: int) -> np.ndarray:
    """
    Log pmf ln P(N = n) for n = lo..hi.

    Args:
        mean: Poisson mean (>= 0)
        lo: First index (>= 0)
        hi: Last index (>= lo)

    Returns:
        Array of hi - lo + 1 log weights (-inf where the weight is exactly 0)
    """
    _check_mean(mean)
    if lo < 0 or hi < lo:
        raise DomainError(f"invalid Poisson index window [{lo}, {hi}]")
    n = np.arange(lo, hi + 1, dtype=float)
    return special.xlogy(n, mean) - mean - special.gammaln(n + 1.0)


def poisson_weights(mean: float, n_max: int) -> np.ndarray:
    """
    Poisson weights w_0..w_{n_max}, computed in log-space then exponentiated.

    Args:
        mean: Poisson mean (>= 0)
        n_max: Last index (>= 0)

    Returns:
        Array of n_max + 1 weights in [0, 1]
    """
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    return np.exp(poisson_log_weights(mean, 0, int(n_max)))


def poisson_upper_tail(mean: float, j: int) -> float:
    """P(N > j) for N ~ Poisson(mean)."""
    _check_mean(mean)
    if j < 0:
        return 1.0
    return float(special.pdtrc(j, mean))


def poisson_lower_tail(mean: float, j: int) -> float:
    """P(N < j) for N ~ Poisson(mean)."""
    _check_mean(mean)
    if j <= 0:
        return 0.0
    return float(special.pdtr(j - 1, mean))


def poisson_tail_quantile(mean: float, eps: float) -> int:
    """
    Smallest J with P(N > J) <= eps.

    Exact log-space summation up to a mean of 1e4; above that a normal
    approximation ceil(mean + z sqrt(mean)) is corrected by local tail
    evaluation.

    Args:
        mean: Poisson mean (>= 0)
        eps: Tail tolerance in (0, 1)

    Returns:
        Truncation index J
    """
    _check_mean(mean)
    if not (0.0 < eps < 1.0):
        raise DomainError(f"eps must lie in (0, 1), got {eps!r}")
    if mean == 0.0:
        return 0

    if mean <= SUMMATION_LIMIT:
        n_top = int(math.ceil(mean + 40.0 * math.sqrt(mean) + 50.0))
        pmf = np.exp(poisson_log_weights(mean, 0, n_top))
        # upper[j] = P(N > j), summed from the far tail inward
        at_least = np.cumsum(pmf[::-1])[::-1]
        upper = np.append(at_least[1:], 0.0)
        return int(np.argmax(upper <= eps))

    z = normal_upper_quantile(eps)
    j = max(int(math.ceil(mean + z * math.sqrt(mean))), 0)
    while poisson_upper_tail(mean, j) > eps:
        j += 1
    while j > 0 and poisson_upper_tail(mean, j - 1) <= eps:
        j -= 1
    return j
