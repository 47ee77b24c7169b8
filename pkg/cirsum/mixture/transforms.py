#!/usr/bin/env python3
"""
Moments, Laplace Transform and Gaussian Limit
Closed-form moments, the Laplace transform in closed and series form, and
the small-step normal approximation of S
"""

import math

import numpy as np
from scipy import special

from ..error_handler import DomainError
from ..models import EvalResult, Moments, TruncationPolicy
from .density import cdf_grid
from .model import SumModel


def moments(m: SumModel) -> Moments:
    """
    Mean and variance of S.

    E[S] = sum a_i c_i (d_i + lam_i), Var(S) = 2 sum (a_i c_i)^2 (d_i + 2 lam_i).
    """
    mean = math.fsum(p.mean for p in m.derived)
    variance = math.fsum(p.variance for p in m.derived)
    return Moments(mean=mean, variance=variance)


def _check_laplace_domain(m: SumModel, u: float):
    pole = -1.0 / (2.0 * max(p.weight * p.c for p in m.derived))
    if not math.isfinite(u) or u <= pole:
        raise DomainError(f"Laplace argument u={u!r} must exceed {pole:.6g}")


def laplace_closed(m: SumModel, u: float) -> float:
    """
    E[exp(-u S)] as the product of the two noncentral chi-square transforms.

    Args:
        m: Sum model
        u: Argument above -1 / (2 max a_i c_i)

    Returns:
        Transform value
    """
    _check_laplace_domain(m, u)
    log_value = 0.0
    for p in m.derived:
        acu = p.weight * p.c * u
        log_value += -0.5 * p.d * math.log1p(2.0 * acu) - p.lam * acu / (1.0 + 2.0 * acu)
    return math.exp(log_value)


def _factor_laplace_series(p, window, u: float):
    log_r = -math.log1p(p.beta * u)
    partial = math.fsum(np.exp(window.log_weights + (p.shape + window.indices) * log_r).tolist())
    if u >= 0:
        tail = window.dropped
    else:
        # sum over all n of w_n r^(d/2 + n) = r^(d/2) exp(mean (r - 1))
        full = math.exp(p.shape * log_r + p.poisson_mean * math.expm1(log_r))
        tail = max(full - partial, 0.0) + 1e-15 * full
    return partial, tail


def laplace_series(m: SumModel, u: float, t: TruncationPolicy = TruncationPolicy()) -> EvalResult:
    """
    Laplace transform as the truncated Poisson double sum of Gamma transforms.

    The double sum factorizes into one Poisson sum per factor, so the bound is
    tail1 (T2 + tail2) + T1 tail2 with T_i the kept partial sums.
    """
    _check_laplace_domain(m, u)
    windows = m.windows(t)
    (t1, tail1), (t2, tail2) = (
        _factor_laplace_series(p, w, u) for p, w in zip(m.derived, windows)
    )
    bound = tail1 * (t2 + tail2) + t1 * tail2
    return EvalResult(
        t1 * t2,
        bound,
        {"n1": (windows[0].lo, windows[0].hi), "n2": (windows[1].lo, windows[1].hi)},
    )


def gaussian_limit_stats(m: SumModel) -> Moments:
    """
    Leading-order conditional mean and variance for small dt.

    mean ~ sum a_i (x_i + kappa_i (theta_i - x_i) dt), var ~ dt sum a_i^2 sigma_i^2 x_i.
    """
    mean = 0.0
    variance = 0.0
    for f in (m.factor1, m.factor2):
        mean += f.weight * (f.x0 + f.kappa * (f.theta - f.x0) * m.dt)
        variance += m.dt * f.weight * f.weight * f.sigma * f.sigma * f.x0
    return Moments(mean=mean, variance=variance)


def gaussian_sup_distance(
    m: SumModel,
    t: TruncationPolicy = TruncationPolicy(),
    points: int = 41,
    z_max: float = 4.0
) -> float:
    """
    sup over z in linspace(-z_max, z_max, points) of |F_S(mean + z std) - Phi(z)|.

    Uses the exact moments of S to standardize.
    """
    mom = moments(m)
    z = np.linspace(-z_max, z_max, points)
    s = np.maximum(mom.mean + z * mom.std, 0.0)
    values = cdf_grid(m, s, t).values
    return float(np.max(np.abs(values - special.ndtr(z))))
