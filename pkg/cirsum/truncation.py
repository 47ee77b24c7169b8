#!/usr/bin/env python3
"""
Poisson Series Truncation
Certified index windows for Poisson-weighted mixture series

Three cut rules are supported: the exact tail quantile, the normal-quantile
approximation ceil(mean + z sqrt(mean)) (verified and bumped until its tail
meets the tolerance), and a weight window grown outward from the mode.
Every window reports the exact probability mass it leaves out.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .error_handler import TruncationBudgetError
from .models.truncation import TruncationMethod
from .specfun import (
    normal_upper_quantile,
    poisson_log_weights,
    poisson_lower_tail,
    poisson_tail_quantile,
    poisson_upper_tail,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PoissonWindow:
    """Index window [lo, hi] of a Poisson(mean) series and the mass it drops."""
    mean: float
    lo: int
    hi: int
    dropped: float

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1)

    @cached_property
    def log_weights(self) -> np.ndarray:
        return poisson_log_weights(self.mean, self.lo, self.hi)

    @property
    def weights(self) -> np.ndarray:
        return np.exp(self.log_weights)

    def dropped_mass(self) -> float:
        """Mass outside the window by complementary summation of the kept weights."""
        return max(0.0, 1.0 - math.fsum(self.weights))


def _dropped(mean: float, lo: int, hi: int) -> float:
    return poisson_lower_tail(mean, lo) + poisson_upper_tail(mean, hi)


def _normal_cut(mean: float, eps: float) -> int:
    hi = int(math.ceil(mean + normal_upper_quantile(eps) * math.sqrt(mean)))
    while poisson_upper_tail(mean, hi) > eps:
        hi += 1
    return hi


def _weight_window(mean: float, eps: float):
    cap = poisson_tail_quantile(mean, eps)
    lo = hi = min(int(math.floor(mean)), cap)
    dropped = _dropped(mean, lo, hi)
    step_up = True
    while dropped > eps:
        can_up = hi < cap
        can_down = lo > 0
        if (step_up and can_up) or not can_down:
            hi += 1
        else:
            lo -= 1
        step_up = not step_up
        dropped = _dropped(mean, lo, hi)
    return lo, hi, dropped


def poisson_window(
    mean: float,
    eps: float,
    method: TruncationMethod = TruncationMethod.TAIL,
    max_terms: int = 1_000_000
) -> PoissonWindow:
    """
    Choose the index window of a Poisson(mean) series for tolerance eps.

    Args:
        mean: Poisson mean (>= 0)
        eps: Allowed dropped mass
        method: Cut rule
        max_terms: Window size budget

    Returns:
        PoissonWindow whose dropped mass is <= eps

    Raises:
        TruncationBudgetError: if the window exceeds max_terms
    """
    method = TruncationMethod(method)
    if mean == 0.0:
        return PoissonWindow(mean=0.0, lo=0, hi=0, dropped=0.0)

    if method is TruncationMethod.TAIL:
        lo, hi = 0, poisson_tail_quantile(mean, eps)
        dropped = poisson_upper_tail(mean, hi)
    elif method is TruncationMethod.NORMAL:
        lo, hi = 0, _normal_cut(mean, eps)
        dropped = poisson_upper_tail(mean, hi)
    else:
        lo, hi, dropped = _weight_window(mean, eps)

    if hi - lo + 1 > max_terms:
        raise TruncationBudgetError(
            f"Poisson window of {hi - lo + 1} terms for mean {mean:.6g} exceeds budget {max_terms}",
            eps=eps,
            terms=hi - lo + 1,
        )
    logger.debug("poisson window mean=%.6g eps=%.3g method=%s -> [%d, %d] dropped=%.3e",
                 mean, eps, method.value, lo, hi, dropped)
    return PoissonWindow(mean=float(mean), lo=lo, hi=hi, dropped=dropped)
