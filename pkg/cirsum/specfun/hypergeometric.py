#!/usr/bin/env python3
"""
Confluent Hypergeometric Function
Kummer's 1F1(a; b; z) for real arguments, evaluated in log-space

Negative arguments are never summed as an alternating series: the Kummer
transformation 1F1(a; b; z) = e^z 1F1(b - a; b; -z) turns them into a
series of nonnegative terms.
"""

import numpy as np

from ..error_handler import ConvergenceError, DomainError
from .logspace import LogValue

TERM_TOLERANCE = 1.0e-16
MAX_TERMS = 1_000_000
RESCALE_AT = 1.0e250


def _positive_series_log(a: np.ndarray, b: np.ndarray, z: np.ndarray) -> np.ndarray:
    """ln sum_k (a)_k / (b)_k z^k / k! for a >= 0, b > 0, z >= 0."""
    total = np.ones(a.size)
    term = np.ones(a.size)
    log_scale = np.zeros(a.size)
    active = np.flatnonzero((z > 0) & (a > 0))
    k = 0
    while active.size:
        if k >= MAX_TERMS:
            raise ConvergenceError(
                f"1F1 series exceeded {MAX_TERMS} terms for {active.size} arguments"
            )
        a_act, b_act, z_act = a[active], b[active], z[active]
        term[active] *= (a_act + k) / (b_act + k) * z_act / (k + 1)
        total[active] += term[active]
        k += 1

        big = total[active] > RESCALE_AT
        if np.any(big):
            idx = active[big]
            log_scale[idx] += np.log(total[idx])
            term[idx] /= total[idx]
            total[idx] = 1.0

        # stop once terms are negligible and the term ratio has turned below one
        next_ratio = (a_act + k) / (b_act + k) * z_act / (k + 1)
        done = (term[active] < TERM_TOLERANCE * total[active]) & (next_ratio < 1.0)
        active = active[~done]
    return np.log(total) + log_scale


def log_kummer_1f1(a, b, z):
    """
    Natural log of 1F1(a; b; z), vectorized.

    Args:
        a: Numerator parameter, a > 0 (a = 0 gives 1)
        b: Denominator parameter, b > 0
        z: Real argument

    Returns:
        ln 1F1 broadcast over the inputs
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    z = np.asarray(z, dtype=float)
    if np.any(~np.isfinite(b)) or np.any(b <= 0):
        raise DomainError("1F1 requires b > 0")
    if np.any(~np.isfinite(z)) or np.any(~np.isfinite(a)):
        raise DomainError("1F1 requires finite a and z")

    a_b, b_b, z_b = np.broadcast_arrays(a, b, z)
    shape = a_b.shape
    a_f, b_f, z_f = (arr.ravel().astype(float) for arr in (a_b, b_b, z_b))

    negative = z_f < 0
    a_eff = np.where(negative, b_f - a_f, a_f)
    z_eff = np.abs(z_f)
    if np.any(a_eff < 0):
        raise DomainError(
            "1F1 series with negative numerator parameter after Kummer transformation "
            "(requires a >= 0 and b - a >= 0 for z < 0)"
        )

    out = _positive_series_log(a_eff, b_f, z_eff) + np.where(negative, z_f, 0.0)
    return float(out[0]) if shape == () else out.reshape(shape)


def kummer_1f1(a: float, b: float, z: float) -> LogValue:
    """
    Kummer's confluent hypergeometric function 1F1(a; b; z) in log-space.

    Args:
        a: Numerator parameter (a Gamma shape, > 0)
        b: Denominator parameter (> 0)
        z: Real argument

    Returns:
        LogValue with sign +1 (1F1 is positive in this parameter range)
    """
    return LogValue.from_log(log_kummer_1f1(a, b, z))
