#!/usr/bin/env python3
"""
Gamma Functions
Log-Gamma, Pochhammer symbols and the regularized incomplete Gamma pair

The incomplete Gamma follows the classic two-branch scheme: lower series
below the crossover x = a + 1, modified-Lentz continued fraction for the
upper function above it. Both branches are vectorized over numpy arrays.
"""

import numpy as np
from scipy import special

from ..error_handler import ConvergenceError, DomainError

EPS = 1.0e-15
FPMIN = 1.0e-300
MAX_ITERATIONS = 100000


def _as_scalar_if_0d(values: np.ndarray):
    return float(values) if np.ndim(values) == 0 else values


def log_gamma(a):
    """
    Natural log of the Gamma function.

    Args:
        a: Positive finite real or array

    Returns:
        ln Gamma(a) with the shape of `a`
    """
    a = np.asarray(a, dtype=float)
    if np.any(~np.isfinite(a)) or np.any(a <= 0):
        raise DomainError("log_gamma requires finite a > 0")
    return _as_scalar_if_0d(special.gammaln(a))


def log_pochhammer(v, k):
    """
    ln((v)_k) = ln Gamma(v+k) - ln Gamma(v); exactly 0 for k = 0.

    Args:
        v: Positive real or array
        k: Nonnegative integer or integer array

    Returns:
        Log rising factorial, broadcast over v and k
    """
    v = np.asarray(v, dtype=float)
    k = np.asarray(k)
    if np.any(~np.isfinite(v)) or np.any(v <= 0):
        raise DomainError("log_pochhammer requires v > 0")
    if np.any(k < 0):
        raise DomainError("log_pochhammer requires k >= 0")
    v, k = np.broadcast_arrays(v, k)
    out = np.where(k == 0, 0.0, special.gammaln(v + k) - special.gammaln(v))
    return _as_scalar_if_0d(out)


def _log_prefactor(a: np.ndarray, x: np.ndarray) -> np.ndarray:
    return -x + a * np.log(x) - special.gammaln(a)


def _lower_series(a: np.ndarray, x: np.ndarray) -> np.ndarray:
    """P(a, x) by the power series, for x < a + 1."""
    ap = a.copy()
    delta = 1.0 / a
    total = delta.copy()
    active = np.arange(a.size)
    for _ in range(MAX_ITERATIONS):
        if active.size == 0:
            break
        ap[active] += 1.0
        delta[active] *= x[active] / ap[active]
        total[active] += delta[active]
        converged = np.abs(delta[active]) < np.abs(total[active]) * EPS
        active = active[~converged]
    if active.size:
        raise ConvergenceError(f"incomplete Gamma series did not converge for {active.size} arguments")
    return total * np.exp(_log_prefactor(a, x))


def _upper_continued_fraction(a: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Q(a, x) by the Legendre continued fraction (modified Lentz), for x >= a + 1."""
    b = x + 1.0 - a
    c = np.full_like(x, 1.0 / FPMIN)
    d = 1.0 / b
    h = d.copy()
    active = np.arange(a.size)
    i = 0
    while active.size:
        i += 1
        if i > MAX_ITERATIONS:
            raise ConvergenceError(
                f"incomplete Gamma continued fraction did not converge for {active.size} arguments"
            )
        an = -i * (i - a[active])
        b[active] += 2.0
        d_act = an * d[active] + b[active]
        d_act = np.where(np.abs(d_act) < FPMIN, FPMIN, d_act)
        c_act = b[active] + an / c[active]
        c_act = np.where(np.abs(c_act) < FPMIN, FPMIN, c_act)
        d_act = 1.0 / d_act
        step = d_act * c_act
        d[active] = d_act
        c[active] = c_act
        h[active] *= step
        active = active[np.abs(step - 1.0) >= EPS]
    return h * np.exp(_log_prefactor(a, x))


def _incomplete_gamma_pair(a, x):
    a = np.asarray(a, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(a)) or np.any(a <= 0):
        raise DomainError("incomplete Gamma requires finite a > 0")
    if np.any(np.isnan(x)) or np.any(x < 0):
        raise DomainError("incomplete Gamma requires x >= 0")

    a_b, x_b = np.broadcast_arrays(a, x)
    shape = a_b.shape
    a_f = a_b.ravel().astype(float)
    x_f = x_b.ravel().astype(float)

    lower = np.zeros(a_f.size)
    upper = np.ones(a_f.size)

    infinite = np.isinf(x_f)
    lower[infinite] = 1.0
    upper[infinite] = 0.0

    series = (x_f > 0) & (x_f < a_f + 1.0) & ~infinite
    if np.any(series):
        p = np.minimum(_lower_series(a_f[series], x_f[series]), 1.0)
        lower[series] = p
        upper[series] = 1.0 - p

    fraction = (x_f >= a_f + 1.0) & ~infinite
    if np.any(fraction):
        q = np.minimum(_upper_continued_fraction(a_f[fraction], x_f[fraction]), 1.0)
        upper[fraction] = q
        lower[fraction] = 1.0 - q

    return lower.reshape(shape), upper.reshape(shape)


def reg_lower_gamma(a, x):
    """
    Regularized lower incomplete Gamma P(a, x) = gamma(a, x) / Gamma(a).

    Args:
        a: Shape, a > 0 (scalar or array)
        x: Argument, x >= 0 (scalar or array, broadcast against a)

    Returns:
        P(a, x) in [0, 1]
    """
    lower, _ = _incomplete_gamma_pair(a, x)
    return _as_scalar_if_0d(lower)


def reg_upper_gamma(a, x):
    """
    Regularized upper incomplete Gamma Q(a, x) = 1 - P(a, x).

    Computed directly from the continued fraction where it is the primary
    branch, so small upper tails keep relative accuracy there.
    """
    _, upper = _incomplete_gamma_pair(a, x)
    return _as_scalar_if_0d(upper)
