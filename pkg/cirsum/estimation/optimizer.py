#!/usr/bin/env python3
"""
Maximum-Likelihood Fitting
Multi-start bounded Nelder-Mead in log-parameter space
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np
from scipy import optimize
from scipy.stats import qmc

from ..error_handler import DomainError
from ..models import TruncationPolicy, format_float
from .likelihood import neg_log_likelihood
from .spec import FitSpec

logger = logging.getLogger(__name__)

MIN_BUDGET = 100
SIMPLEX_XATOL = 1.0e-6

FIT_COLUMNS = ['nll', 'n_evaluations', 'stop_reason', 'simplex_diameter']


@dataclass
class StartRecord:
    """One optimizer start."""
    initial: Dict[str, float]
    initial_nll: float
    point: Dict[str, float]
    nll: float
    evaluations: int
    converged: bool


@dataclass
class FitResult:
    """Best point over all starts and its diagnostics."""
    point: Dict[str, float]
    nll: float
    n_evaluations: int
    stop_reason: str
    simplex_diameter: float = 0.0
    starts: List[StartRecord] = field(default_factory=list)

    def to_lines(self) -> List[str]:
        """key=value lines."""
        lines = [f"{name}={format_float(value)}" for name, value in self.point.items()]
        lines += [
            f"nll={format_float(self.nll)}",
            f"n_evaluations={self.n_evaluations}",
            f"stop_reason={self.stop_reason}",
            f"simplex_diameter={format_float(self.simplex_diameter)}",
        ]
        return lines

    def csv_header(self) -> List[str]:
        return list(self.point) + FIT_COLUMNS

    def csv_row(self) -> List[str]:
        return [format_float(v) for v in self.point.values()] + [
            format_float(self.nll), str(self.n_evaluations), self.stop_reason, format_float(self.simplex_diameter),
        ]


class _CountingObjective:
    def __init__(self, spec: FitSpec, t: TruncationPolicy):
        self.spec = spec
        self.t = t
        self.calls = 0
        self.first_value = None

    def __call__(self, y: np.ndarray) -> float:
        self.calls += 1
        value = neg_log_likelihood(self.spec, self.spec.point_from_log(y), self.t)
        if self.first_value is None:
            self.first_value = value
        return value


def _simplex_diameter(simplex: np.ndarray) -> float:
    return float(np.max(np.abs(simplex[1:] - simplex[0]))) if len(simplex) > 1 else 0.0


def fit_mle(
    spec: FitSpec,
    t: TruncationPolicy = TruncationPolicy(),
    budget: int = 600,
    n_starts: int = 5,
    seed: int = 1
) -> FitResult:
    """
    Minimize the negative log-likelihood over the free parameters.

    Args:
        spec: Fit specification
        t: Truncation policy of the likelihood
        budget: Total evaluation budget across starts (>= 100)
        n_starts: Latin-hypercube start points
        seed: Seed of the start design

    Returns:
        FitResult; budget exhaustion is a stop reason, not an error
    """
    if not spec.free:
        nll = neg_log_likelihood(spec, {}, t)
        return FitResult(point=dict(spec.fixed_values), nll=nll, n_evaluations=1, stop_reason='no_free_parameters')
    if budget < MIN_BUDGET:
        raise DomainError(f"budget must be >= {MIN_BUDGET}, got {budget}")

    bounds = np.array(spec.log_bounds)
    design = qmc.LatinHypercube(d=len(spec.free), seed=seed).random(n_starts)
    initials = bounds[:, 0] + design * (bounds[:, 1] - bounds[:, 0])
    per_start = max(budget // n_starts, len(spec.free) + 2)

    starts = []
    best = None
    total = 0
    for index, y0 in enumerate(initials):
        objective = _CountingObjective(spec, t)
        res = optimize.minimize(
            objective, y0, method='Nelder-Mead', bounds=bounds,
            options={'maxfev': per_start, 'xatol': SIMPLEX_XATOL, 'fatol': np.inf},
        )
        total += objective.calls
        record = StartRecord(
            initial=spec.point_from_log(y0),
            initial_nll=objective.first_value,
            point=spec.point_from_log(res.x),
            nll=float(res.fun),
            evaluations=objective.calls,
            converged=bool(res.success),
        )
        starts.append(record)
        logger.info("start %d: nll %.6f -> %.6f in %d evaluations (%s)",
                    index, record.initial_nll, record.nll, record.evaluations,
                    'converged' if record.converged else 'budget')
        if best is None or record.nll < best[0].nll:
            best = (record, _simplex_diameter(res.final_simplex[0]))

    record, diameter = best
    return FitResult(
        point=record.point,
        nll=record.nll,
        n_evaluations=total,
        stop_reason='converged' if record.converged else 'budget_exhausted',
        simplex_diameter=diameter,
        starts=starts,
    )
