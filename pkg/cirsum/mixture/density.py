#!/usr/bin/env python3
"""
Mixture Density and Distribution Function
Density and CDF of S = a1 X1 + a2 X2 with certified truncation bounds

The density sums Poisson-weighted Gamma-convolution kernels over the (n1, n2)
rectangle of the two per-factor windows (the KUMMER engine) or evaluates the
regrouped one-index Gamma series (the GAMMA_SERIES engine). The CDF uses the
regrouped series; `cdf_cellwise` sums the conditional CDF per cell instead.
Equal scales collapse to one Poisson index in both engines.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Tuple

import numpy as np
from scipy import special

from ..error_handler import ConvergenceError, DomainError, NumericalError
from ..kernel import KernelParams, gamma_sup_density, kernel_cdf, log_kernel_pdf_grid
from ..models import EvalResult, TruncationPolicy
from .model import SumModel
from .series import mixture_series

logger = logging.getLogger(__name__)

PRUNE_FRACTION = 1.0e-3
ROUNDING_SLACK = 1.0e-12
CELL_CHUNK_ELEMENTS = 200_000
# beyond this |z| the 1F1 series needs too many terms per cell
KUMMER_MAX_ARGUMENT = 1.0e4


class DensityEngine(Enum):
    KUMMER = "kummer"
    GAMMA_SERIES = "gamma_series"


@dataclass(frozen=True)
class GridResult:
    """Values on a grid of s and one certified bound shared by every point."""
    s: np.ndarray
    values: np.ndarray
    trunc_error_bound: float
    terms_used: Dict[str, Tuple[int, int]] = field(default_factory=dict)


def _clamp(values: np.ndarray, lower: float, upper: float, bound: float, what: str) -> np.ndarray:
    slack = bound + ROUNDING_SLACK
    if np.any(values < lower - slack) or np.any(values > upper + slack):
        worst = float(np.max(np.maximum(lower - values, values - upper)))
        raise NumericalError(f"{what} outside [{lower}, {upper}] by {worst:.3e}, beyond certified bound {bound:.3e}")
    return np.clip(values, lower, upper)


def _check_grid(s) -> np.ndarray:
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(~np.isfinite(s)) or np.any(s < 0):
        raise DomainError("evaluation points must be finite and >= 0")
    return s


def _map_chunks(func, s: np.ndarray, workers: int, chunk: int) -> np.ndarray:
    slices = [slice(i, i + chunk) for i in range(0, s.size, chunk)]
    if workers <= 1 or len(slices) <= 1:
        parts = [func(s[sl]) for sl in slices]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda sl: func(s[sl]), slices))
    return np.concatenate(parts) if parts else np.zeros(0)


class _KummerCells:
    """Retained (n1, n2) cells of the rectangle with their log weights."""

    def __init__(self, m: SumModel, t: TruncationPolicy):
        p1, p2 = m.derived
        self.beta1, self.beta2 = p1.beta, p2.beta
        w1, w2 = m.windows(t)
        log_w = w1.log_weights[:, None] + w2.log_weights[None, :]
        n1, n2 = np.meshgrid(w1.indices, w2.indices, indexing='ij')

        threshold = PRUNE_FRACTION * t.eps / log_w.size
        keep = log_w >= math.log(threshold)
        pruned = math.fsum(np.exp(log_w[~keep]).tolist())

        self.log_w = log_w[keep]
        self.nu1 = p1.shape + n1[keep]
        self.nu2 = p2.shape + n2[keep]
        self.dropped = 1.0 - (1.0 - w1.dropped) * (1.0 - w2.dropped) + pruned
        self.kernel_sup = min(gamma_sup_density(p1.shape, p1.beta), gamma_sup_density(p2.shape, p2.beta))
        self.terms_used = {"n1": (w1.lo, w1.hi), "n2": (w2.lo, w2.hi)}
        logger.debug("kummer engine: %d of %d cells kept, pruned mass %.3e", self.log_w.size, log_w.size, pruned)

    @property
    def chunk(self) -> int:
        return max(1, CELL_CHUNK_ELEMENTS // max(1, self.log_w.size))

    def evaluate(self, s: np.ndarray) -> np.ndarray:
        out = np.zeros(s.size)
        positive = s > 0
        if np.any(positive):
            log_f = log_kernel_pdf_grid(
                self.nu1[None, :], self.nu2[None, :], self.beta1, self.beta2, s[positive][:, None]
            )
            out[positive] = np.exp(special.logsumexp(log_f + self.log_w[None, :], axis=1))
        return out


def pdf_grid(
    m: SumModel,
    s,
    t: TruncationPolicy = TruncationPolicy(),
    engine: DensityEngine = DensityEngine.KUMMER,
    workers: int = 1
) -> GridResult:
    """
    Density of S on a grid of s >= 0 (the density at 0 is its limit 0).

    Args:
        m: Sum model
        s: Evaluation points
        t: Truncation policy
        engine: KUMMER (kernel per cell) or GAMMA_SERIES (regrouped series);
            KUMMER switches to GAMMA_SERIES for extreme scale ratios
        workers: Threads used across chunks of s

    Returns:
        GridResult with the certified bound
    """
    s = _check_grid(s)
    engine = DensityEngine(engine)

    if engine is DensityEngine.KUMMER and not m.equal_scale:
        p1, p2 = m.derived
        z_max = float(np.max(s)) * abs(1.0 / p2.beta - 1.0 / p1.beta) if s.size else 0.0
        if z_max > KUMMER_MAX_ARGUMENT:
            logger.info("kummer engine argument %.3g exceeds %.3g; using the gamma series",
                        z_max, KUMMER_MAX_ARGUMENT)
            engine = DensityEngine.GAMMA_SERIES

    values = None
    if engine is DensityEngine.KUMMER and not m.equal_scale:
        cells = _KummerCells(m, t)
        try:
            values = _map_chunks(cells.evaluate, s, workers, cells.chunk)
            bound, terms = cells.dropped * cells.kernel_sup, cells.terms_used
        except ConvergenceError as e:
            logger.warning("kummer engine failed (%s); using the gamma series", e)
    if values is None:
        series = mixture_series(m, t)
        chunk = max(1, 400_000 // max(1, series.weights.size))
        values = _map_chunks(series.pdf, s, workers, chunk)
        bound, terms = series.pdf_bound(), series.terms_used

    values = _clamp(values, 0.0, math.inf, bound, "density")
    return GridResult(s=s, values=values, trunc_error_bound=bound, terms_used=terms)


def pdf(
    m: SumModel,
    s: float,
    t: TruncationPolicy = TruncationPolicy(),
    engine: DensityEngine = DensityEngine.KUMMER
) -> EvalResult:
    """
    Density of S at s > 0.

    Args:
        m: Sum model
        s: Evaluation point (> 0)
        t: Truncation policy
        engine: Evaluation engine

    Returns:
        EvalResult with the certified bound
    """
    if not s > 0:
        raise DomainError(f"pdf requires s > 0, got {s!r}")
    result = pdf_grid(m, [s], t, engine)
    return EvalResult(float(result.values[0]), result.trunc_error_bound, result.terms_used)


def cdf_grid(m: SumModel, s, t: TruncationPolicy = TruncationPolicy(), workers: int = 1) -> GridResult:
    """Distribution function of S on a grid of s >= 0."""
    s = _check_grid(s)
    series = mixture_series(m, t)
    chunk = max(1, 400_000 // max(1, series.weights.size))
    values = _map_chunks(series.cdf, s, workers, chunk)
    values = _clamp(values, 0.0, 1.0, series.dropped, "cdf")
    values[s == 0] = 0.0
    return GridResult(s=s, values=values, trunc_error_bound=series.dropped, terms_used=series.terms_used)


def cdf(m: SumModel, s: float, t: TruncationPolicy = TruncationPolicy()) -> EvalResult:
    """
    Distribution function of S at s >= 0.

    Args:
        m: Sum model
        s: Evaluation point
        t: Truncation policy

    Returns:
        EvalResult in [0, 1]; F(0) = 0
    """
    if s < 0:
        raise DomainError(f"cdf requires s >= 0, got {s!r}")
    result = cdf_grid(m, [s], t)
    return EvalResult(float(result.values[0]), result.trunc_error_bound, result.terms_used)


def cdf_cellwise(m: SumModel, s: float, t: TruncationPolicy = TruncationPolicy()) -> EvalResult:
    """
    CDF by the conditional series of every (n1, n2) cell, weighted by w_n1 w_n2.

    Slow; used as an independent path against `cdf`.
    """
    if s < 0:
        raise DomainError(f"cdf requires s >= 0, got {s!r}")
    p1, p2 = m.derived
    w1, w2 = m.windows(t)
    if s == 0:
        return EvalResult(0.0, 0.0, {"n1": (w1.lo, w1.hi), "n2": (w2.lo, w2.hi)})

    inner_tol = PRUNE_FRACTION * t.eps
    total = []
    inner_bound = 0.0
    k_max = 0
    for n1, wt1 in zip(w1.indices, w1.weights):
        for n2, wt2 in zip(w2.indices, w2.weights):
            cell = kernel_cdf(KernelParams(p1.shape + n1, p2.shape + n2, p1.beta, p2.beta), s, inner_tol)
            total.append(wt1 * wt2 * cell.value)
            inner_bound += wt1 * wt2 * cell.trunc_error_bound
            k_max = max(k_max, cell.terms_used["k"][1])
    bound = 1.0 - (1.0 - w1.dropped) * (1.0 - w2.dropped) + inner_bound
    value = float(_clamp(np.array([math.fsum(total)]), 0.0, 1.0, bound, "cdf")[0])
    return EvalResult(value, bound, {"n1": (w1.lo, w1.hi), "n2": (w2.lo, w2.hi), "k": (0, k_max)})
