#!/usr/bin/env python3
"""
Single-Factor CIR Transition
Transition parameters, Feller validation, exact sampling and the one-factor
Poisson-Gamma mixture density and distribution function
"""

import logging
import math
from typing import Optional, Union

import numpy as np
from scipy import special

from .error_handler import DomainError
from .kernel import gamma_sup_density
from .models import CirFactor, EvalResult, TransitionParams, TruncationPolicy, feller_holds
from .specfun import reg_lower_gamma
from .truncation import poisson_window

logger = logging.getLogger(__name__)

RandomState = Union[None, int, np.random.Generator]


def check_feller(f: CirFactor) -> bool:
    """True iff 2 kappa theta >= sigma^2."""
    return feller_holds(f.kappa, f.theta, f.sigma)


def transition_params(f: CirFactor, dt: float) -> TransitionParams:
    """
    Scale, degrees of freedom and noncentrality of the step dt.

    Args:
        f: CIR factor
        dt: Step length (> 0)

    Returns:
        TransitionParams with beta = 2 a c
    """
    if not math.isfinite(dt) or dt <= 0:
        raise DomainError(f"dt must be finite and > 0, got {dt!r}")

    kdt = f.kappa * dt
    decay = math.exp(-kdt)
    one_minus = -math.expm1(-kdt)
    sigma2 = f.sigma * f.sigma

    c = sigma2 * one_minus / (4.0 * f.kappa)
    d = 4.0 * f.kappa * f.theta / sigma2

    underflow = decay == 0.0 and f.x0 > 0.0
    if underflow:
        logger.warning("exp(-kappa*dt) underflows for kappa*dt=%.6g; noncentrality set to 0", kdt)
        lam = 0.0
    else:
        lam = 4.0 * f.kappa * decay * f.x0 / (sigma2 * one_minus)

    return TransitionParams(
        c=c,
        d=d,
        lam=lam,
        beta=2.0 * f.weight * c,
        dt=dt,
        weight=f.weight,
        lambda_underflow=underflow,
    )


def conditional_mean(f: CirFactor, dt: float) -> float:
    """E[a X(t+dt) | X(t) = x0]."""
    decay = math.exp(-f.kappa * dt)
    return f.weight * (f.x0 * decay - f.theta * math.expm1(-f.kappa * dt))


def conditional_variance(f: CirFactor, dt: float) -> float:
    """Var[a X(t+dt) | X(t) = x0]."""
    decay = math.exp(-f.kappa * dt)
    one_minus = -math.expm1(-f.kappa * dt)
    s2k = f.sigma * f.sigma / f.kappa
    var = f.x0 * s2k * decay * one_minus + 0.5 * f.theta * s2k * one_minus * one_minus
    return f.weight * f.weight * var


def _generator(rng: RandomState) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def sample_transitions(p: TransitionParams, size: int, rng: RandomState = None) -> np.ndarray:
    """
    Exact draws of a * X(t + dt): N ~ Poisson(lam / 2), G ~ Gamma(d / 2 + N, 1), return beta * G.

    numpy's Gamma generator (Marsaglia-Tsang with the shape < 1 boost) is valid
    for every positive shape.
    """
    gen = _generator(rng)
    counts = gen.poisson(p.poisson_mean, size=size)
    return p.beta * gen.gamma(p.shape + counts, 1.0)


def sample_transition(p: TransitionParams, rng: RandomState = None) -> float:
    """One exact draw of a * X(t + dt)."""
    return float(sample_transitions(p, 1, rng)[0])


def _gamma_log_pdf(shape: np.ndarray, beta: float, s: np.ndarray) -> np.ndarray:
    return special.xlogy(shape - 1.0, s) - s / beta - special.gammaln(shape) - shape * math.log(beta)


def single_factor_density(p: TransitionParams, trunc: TruncationPolicy):
    """
    Vectorized density callable of a * X(t + dt) for a fixed truncation.

    Returns:
        (density, trunc_error_bound, window); density maps an array of s >= 0 to values
    """
    window = poisson_window(p.poisson_mean, trunc.eps, trunc.method, trunc.max_terms)
    shapes = p.shape + window.indices
    log_weights = window.log_weights

    def density(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        log_terms = log_weights[None, :] + _gamma_log_pdf(shapes[None, :], p.beta, s[:, None])
        return np.exp(special.logsumexp(log_terms, axis=1))

    min_dropped_shape = p.shape if window.lo > 0 else p.shape + window.hi + 1
    bound = window.dropped * gamma_sup_density(min_dropped_shape, p.beta) if window.dropped > 0 else 0.0
    return density, bound, window


def single_factor_pdf_grid(p: TransitionParams, s, trunc: TruncationPolicy):
    """
    Density of a * X(t + dt) on an array of s >= 0.

    Returns:
        (values, trunc_error_bound, window) with one shared bound for the whole grid
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(s < 0):
        raise DomainError("density argument must be >= 0")
    density, bound, window = single_factor_density(p, trunc)
    return density(s), bound, window


def single_factor_pdf(p: TransitionParams, s: float, trunc: TruncationPolicy) -> EvalResult:
    """
    Density of a * X(t + dt) at s as a truncated Poisson-Gamma mixture.

    Args:
        p: Transition parameters
        s: Evaluation point (> 0)
        trunc: Truncation policy

    Returns:
        EvalResult with the certified truncation bound
    """
    if not s > 0:
        raise DomainError(f"single_factor_pdf requires s > 0, got {s!r}")
    values, bound, window = single_factor_pdf_grid(p, [s], trunc)
    return EvalResult(float(values[0]), bound, {"n": (window.lo, window.hi)})


def single_factor_cdf(p: TransitionParams, s: float, trunc: TruncationPolicy) -> EvalResult:
    """Distribution function of a * X(t + dt): sum_n w_n P(d/2 + n, s / beta)."""
    if s < 0:
        raise DomainError(f"single_factor_cdf requires s >= 0, got {s!r}")
    window = poisson_window(p.poisson_mean, trunc.eps, trunc.method, trunc.max_terms)
    if s == 0:
        return EvalResult(0.0, 0.0, {"n": (window.lo, window.hi)})
    probs = reg_lower_gamma(p.shape + window.indices, s / p.beta)
    value = math.fsum(window.weights * probs)
    return EvalResult(min(max(value, 0.0), 1.0), window.dropped, {"n": (window.lo, window.hi)})
