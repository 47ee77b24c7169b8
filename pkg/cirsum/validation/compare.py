#!/usr/bin/env python3
"""
Analytic-versus-Sample Comparisons
Histogram integrated squared error, Kolmogorov-Smirnov distance, moment
deltas and the quadrature oracle cross-check
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import integrate, interpolate, stats

from ..error_handler import DegenerateSampleError, DomainError, QuadratureError
from ..mixture import DensityEngine, SumModel, cdf_grid, mixture_series, moments, pdf_grid
from ..models import TruncationPolicy
from ..transition import single_factor_density

logger = logging.getLogger(__name__)

UPPER_PERCENTILE = 99.9
MIN_BINS = 50
MIN_NONZERO_BINS = 100
KS_MIN_SAMPLES = 10_000
KS_NODES = 2049
ORACLE_QUAD_TOLERANCE = 1.0e-9


@dataclass(frozen=True)
class DensityComparison:
    """Histogram density estimate against the analytic density at bin midpoints."""
    edges: np.ndarray
    estimate: np.ndarray
    analytic: np.ndarray
    ise_raw: float
    ise: float
    trunc_error_bound: float

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])


@dataclass(frozen=True)
class CdfComparison:
    """Kolmogorov-Smirnov distance between the sample and the analytic CDF."""
    ks_sup: float
    trunc_error_bound: float
    interpolation_error: float
    n_samples: int

    @property
    def bound(self) -> float:
        return self.trunc_error_bound + self.interpolation_error

    @property
    def threshold(self) -> float:
        return 1.63 / math.sqrt(self.n_samples) + self.bound


@dataclass(frozen=True)
class OracleReport:
    """Largest deviations of the mixture pdf and cdf from their quadrature oracles."""
    points: np.ndarray
    pdf_max_abs_error: float
    cdf_max_abs_error: float


def integrated_squared_error(estimate, analytic, width: float) -> float:
    """sum_bins (estimate - analytic)^2 * width."""
    diff = np.asarray(estimate, dtype=float) - np.asarray(analytic, dtype=float)
    return float(np.sum(diff * diff) * width)


def density_comparison(
    m: SumModel,
    samples: np.ndarray,
    n_bins: int = 200,
    t: TruncationPolicy = TruncationPolicy(),
    workers: int = 1
) -> DensityComparison:
    """
    ISE between the equal-width histogram on [0, p99.9] and the analytic density.

    `ise` is in standardized units (the ISE of S / std); `ise_raw` is in the
    units of S.

    Raises:
        DegenerateSampleError: if fewer than min(100, n_bins) bins are occupied
    """
    if n_bins < MIN_BINS:
        raise DomainError(f"n_bins must be >= {MIN_BINS}, got {n_bins}")
    samples = np.asarray(samples, dtype=float)
    upper = float(np.percentile(samples, UPPER_PERCENTILE))
    if not upper > 0:
        raise DegenerateSampleError("sample 99.9th percentile is not positive")

    counts, edges = np.histogram(samples, bins=n_bins, range=(0.0, upper))
    occupied = int(np.count_nonzero(counts))
    if occupied < min(MIN_NONZERO_BINS, n_bins):
        raise DegenerateSampleError(f"only {occupied} of {n_bins} histogram bins are occupied")

    width = upper / n_bins
    estimate = counts / (samples.size * width)
    midpoints = 0.5 * (edges[:-1] + edges[1:])
    analytic = pdf_grid(m, midpoints, t, DensityEngine.KUMMER, workers)

    ise_raw = integrated_squared_error(estimate, analytic.values, width)
    return DensityComparison(
        edges=edges,
        estimate=estimate,
        analytic=analytic.values,
        ise_raw=ise_raw,
        ise=ise_raw * moments(m).std,
        trunc_error_bound=analytic.trunc_error_bound,
    )


def cdf_comparison(
    m: SumModel,
    samples: np.ndarray,
    t: TruncationPolicy = TruncationPolicy(),
    n_nodes: int = KS_NODES,
    workers: int = 1
) -> CdfComparison:
    """
    sup_s |ECDF(s) - F(s)| over all sample points.

    F is evaluated exactly on nodes at the sample quantiles and interpolated
    with a monotone PCHIP; the interpolation error measured at node midpoints
    is added to the reported bound.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.size < KS_MIN_SAMPLES:
        logger.warning("KS comparison on %d samples (< %d); the band is loose", samples.size, KS_MIN_SAMPLES)

    nodes = np.unique(np.concatenate((
        [0.0],
        np.quantile(samples, np.linspace(0.0, 1.0, n_nodes)),
    )))
    exact = cdf_grid(m, nodes, t, workers)
    values = np.maximum.accumulate(exact.values)
    curve = interpolate.PchipInterpolator(nodes, values, extrapolate=True)

    mids = 0.5 * (nodes[:-1] + nodes[1:])
    interpolation_error = float(np.max(np.abs(curve(mids) - cdf_grid(m, mids, t, workers).values)))

    statistic = stats.kstest(samples, lambda x: np.clip(curve(x), 0.0, 1.0)).statistic
    return CdfComparison(
        ks_sup=float(statistic),
        trunc_error_bound=exact.trunc_error_bound,
        interpolation_error=interpolation_error,
        n_samples=samples.size,
    )


def moment_check(m: SumModel, samples: np.ndarray):
    """
    Sample mean and variance deviations from the closed form, in standard errors.

    Returns:
        (mean_delta_sigmas, var_delta_sigmas)
    """
    samples = np.asarray(samples, dtype=float)
    n = samples.size
    mom = moments(m)
    centered = samples - samples.mean()
    sample_var = float(np.mean(centered ** 2) * n / (n - 1))
    fourth = float(np.mean(centered ** 4))

    mean_delta = (float(samples.mean()) - mom.mean) / (mom.std / math.sqrt(n))
    var_se = math.sqrt(max(fourth - sample_var ** 2, 0.0) / n)
    var_delta = (sample_var - mom.variance) / var_se if var_se > 0 else 0.0
    return mean_delta, var_delta


def default_oracle_points(m: SumModel) -> np.ndarray:
    mom = moments(m)
    z = np.array([-1.5, -1.0, -0.5, 0.5, 1.0, 2.0])
    points = mom.mean + z * mom.std
    return points[points > 0]


def _quad(func, a: float, b: float, what: str, points: Optional[Sequence[float]] = None) -> float:
    value, abserr = integrate.quad(func, a, b, epsabs=1e-13, epsrel=1e-12, limit=400, points=points)
    if abserr > ORACLE_QUAD_TOLERANCE:
        raise QuadratureError(f"{what} quadrature did not converge", achieved_error=abserr)
    return value


def oracle_crosscheck(
    m: SumModel,
    grid: Optional[Sequence[float]] = None,
    t: TruncationPolicy = TruncationPolicy(eps=1e-12)
) -> OracleReport:
    """
    Compare the mixture against brute-force quadrature.

    The pdf is checked against the convolution integral of the two single-factor
    transition densities; the cdf against the integral of the mixture density.
    """
    points = np.asarray(default_oracle_points(m) if grid is None else grid, dtype=float)
    if points.size < 1 or np.any(points <= 0):
        raise DomainError("oracle grid needs interior points > 0")

    density1, _, _ = single_factor_density(m.derived1, t)
    density2, _, _ = single_factor_density(m.derived2, t)
    series = mixture_series(m, t)

    analytic_pdf = pdf_grid(m, points, t).values
    analytic_cdf = cdf_grid(m, points, t).values

    pdf_errors = []
    cdf_errors = []
    for s, f_value, F_value in zip(points, analytic_pdf, analytic_cdf):
        convolution = _quad(lambda u: float(density1(u)[0] * density2(s - u)[0]), 0.0, s, "convolution")
        pdf_errors.append(abs(convolution - f_value))
        integral = _quad(lambda u: float(series.pdf(u)[0]), 0.0, s, "density")
        cdf_errors.append(abs(integral - F_value))

    return OracleReport(points=points, pdf_max_abs_error=max(pdf_errors), cdf_max_abs_error=max(cdf_errors))
