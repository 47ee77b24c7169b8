#!/usr/bin/env python3
"""
Regrouped Gamma Series
S as a single-index Gamma mixture sum_j W_j Gamma(A + j, beta_small)

The factor with the larger scale is expanded into its negative-binomial
mixture of Gammas at the smaller scale; after that every (n1, n2, k) cell of
the conditional CDF series is a Gamma with shape A + n1 + n2 + k, so the triple
series collapses onto one index j. The weights do not depend on s.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np
from scipy import special, stats

from ..kernel import gamma_sup_density, negative_binomial_log_weights, negative_binomial_tail
from ..models import TruncationPolicy
from ..specfun import reg_lower_gamma
from .model import SumModel

logger = logging.getLogger(__name__)

INNER_EPS_FRACTION = 1.0e-3
CHUNK_ELEMENTS = 400_000


@dataclass(frozen=True)
class MixtureSeries:
    """Weights W_j of the Gamma(shape0 + j, scale) mixture and the mass the truncation dropped."""
    weights: np.ndarray
    shape0: float
    scale: float
    poisson_dropped: float
    nb_dropped: float
    kernel_sup: float
    terms_used: Dict[str, Tuple[int, int]] = field(default_factory=dict)

    @property
    def dropped(self) -> float:
        return self.poisson_dropped + self.nb_dropped

    @property
    def shapes(self) -> np.ndarray:
        return self.shape0 + np.arange(self.weights.size)

    def pdf_bound(self) -> float:
        bound = self.poisson_dropped * self.kernel_sup
        if self.nb_dropped > 0:
            bound += self.nb_dropped * gamma_sup_density(self.shape0, self.scale)
        return bound

    def _chunks(self, s: np.ndarray):
        step = max(1, CHUNK_ELEMENTS // max(1, self.weights.size))
        for start in range(0, s.size, step):
            yield slice(start, start + step)

    def pdf(self, s) -> np.ndarray:
        """Mixture density at each s >= 0."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        out = np.zeros(s.size)
        shapes = self.shapes
        log_norm = special.gammaln(shapes) + shapes * math.log(self.scale)
        for sl in self._chunks(s):
            block = s[sl][:, None]
            log_pdf = special.xlogy(shapes - 1.0, block) - block / self.scale - log_norm
            out[sl] = np.exp(log_pdf) @ self.weights
        return out

    def cdf(self, s) -> np.ndarray:
        """Mixture distribution function at each s >= 0."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        out = np.zeros(s.size)
        shapes = self.shapes
        for sl in self._chunks(s):
            x = s[sl][:, None] / self.scale
            out[sl] = reg_lower_gamma(shapes[None, :], x) @ self.weights
        return out


def _nb_cut(nu: float, p: float, tol: float) -> int:
    k = int(stats.nbinom.isf(tol, nu, p))
    k = max(k, 0)
    while negative_binomial_tail(nu, p, k) > tol:
        k += 1
    return k


def mixture_series(m: SumModel, t: TruncationPolicy) -> MixtureSeries:
    """
    Build the regrouped Gamma series of S under policy t.

    Args:
        m: Sum model
        t: Truncation policy

    Returns:
        MixtureSeries with certified dropped mass
    """
    p1, p2 = m.derived
    kernel_sup = min(gamma_sup_density(p1.shape, p1.beta), gamma_sup_density(p2.shape, p2.beta))

    if m.equal_scale:
        window = m.combined_window(t)
        weights = np.zeros(window.hi + 1)
        weights[window.lo:] = window.weights
        return MixtureSeries(
            weights=weights,
            shape0=p1.shape + p2.shape,
            scale=p1.beta,
            poisson_dropped=window.dropped,
            nb_dropped=0.0,
            kernel_sup=kernel_sup,
            terms_used={"j": (window.lo, window.hi)},
        )

    w1, w2 = m.windows(t)
    if p1.beta >= p2.beta:
        (large, w_large), (small, w_small) = (p1, w1), (p2, w2)
    else:
        (large, w_large), (small, w_small) = (p2, w2), (p1, w1)
    ratio = small.beta / large.beta

    small_weights = w_small.weights
    small_mass = math.fsum(small_weights)
    inner_tol = INNER_EPS_FRACTION * t.eps
    poisson_dropped = 1.0 - (1.0 - w1.dropped) * (1.0 - w2.dropped)

    cuts = [_nb_cut(large.shape + n, ratio, inner_tol) for n in w_large.indices]
    size = w_large.hi + w_small.hi + max(cuts) + 1
    weights = np.zeros(size)
    nb_dropped = 0.0
    for n_large, w_n, cut in zip(w_large.indices, w_large.weights, cuts):
        nu = large.shape + n_large
        nb = np.exp(negative_binomial_log_weights(nu, ratio, np.arange(cut + 1)))
        block = w_n * np.convolve(nb, small_weights)
        offset = n_large + w_small.lo
        weights[offset:offset + block.size] += block
        nb_dropped += w_n * small_mass * float(negative_binomial_tail(nu, ratio, cut))

    logger.debug("mixture series: %d Gamma terms, poisson dropped %.3e, nb dropped %.3e",
                 size, poisson_dropped, nb_dropped)
    return MixtureSeries(
        weights=weights,
        shape0=large.shape + small.shape,
        scale=small.beta,
        poisson_dropped=poisson_dropped,
        nb_dropped=nb_dropped,
        kernel_sup=kernel_sup,
        terms_used={"n1": (w1.lo, w1.hi), "n2": (w2.lo, w2.hi), "k": (0, max(cuts)), "j": (0, size - 1)},
    )
