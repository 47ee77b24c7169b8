#!/usr/bin/env python3
"""
Exact Likelihood
Negative log-likelihood of observed sums under the mixture density
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Mapping

import numpy as np

from ..mixture import DensityEngine, pdf_grid
from ..models import TruncationPolicy
from .spec import FitSpec

logger = logging.getLogger(__name__)

DENSITY_FLOOR = 1.0e-300
LIKELIHOOD_EPS = 1.0e-10


@dataclass(frozen=True)
class LikelihoodEvaluation:
    nll: float
    floored_indices: List[int]
    trunc_error_bound: float


def likelihood_details(
    spec: FitSpec,
    point: Mapping[str, float],
    t: TruncationPolicy = TruncationPolicy()
) -> LikelihoodEvaluation:
    """
    NLL with the observations whose density hit the floor.

    Args:
        spec: Fit specification
        point: Values of the free parameters
        t: Truncation policy; eps is tightened to at most 1e-10

    Returns:
        LikelihoodEvaluation
    """
    model = spec.model_at(point)
    policy = t.with_eps(min(t.eps, LIKELIHOOD_EPS))
    density = pdf_grid(model, spec.observations, policy, DensityEngine.GAMMA_SERIES, spec.workers)

    values = density.values
    floored = np.flatnonzero(values < DENSITY_FLOOR)
    if floored.size:
        logger.warning("density floor hit at %d observations (first indices %s)",
                       floored.size, floored[:10].tolist(), extra={'context': {'point': dict(point)}})
    logs = np.log(np.maximum(values, DENSITY_FLOOR))
    return LikelihoodEvaluation(
        nll=-math.fsum(logs.tolist()),
        floored_indices=floored.tolist(),
        trunc_error_bound=density.trunc_error_bound,
    )


def neg_log_likelihood(
    spec: FitSpec,
    point: Mapping[str, float],
    t: TruncationPolicy = TruncationPolicy()
) -> float:
    """-sum_i log f_S(obs_i) at `point`."""
    return likelihood_details(spec, point, t).nll
