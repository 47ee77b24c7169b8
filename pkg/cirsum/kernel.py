#!/usr/bin/env python3
"""
Gamma Convolution Kernel
Density and distribution function of Y1 + Y2 with independent
Yi ~ Gamma(nu_i, beta_i) and unequal scales

With canonical orientation beta2 <= beta1 the density is

    f(s) = s^(a0-1) e^(-s/beta1) / (Gamma(a0) beta1^nu1 beta2^nu2)
           * 1F1(nu2; a0; s (1/beta1 - 1/beta2)),        a0 = nu1 + nu2,

whose 1F1 argument is <= 0, so the Kummer transformation always applies.
The distribution function is the negative-binomial mixture
sum_k NB_k(nu1, beta2/beta1) P(a0 + k, s / beta2) with nonnegative terms.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .error_handler import DomainError, QuadratureError, TruncationBudgetError
from .models import EvalResult
from .specfun import log_gamma, log_kummer_1f1, reg_lower_gamma

NEAR_EQUAL_SCALE = 1.0e-12
CDF_BLOCK = 64
MAX_CDF_TERMS = 1_000_000
ORACLE_TOLERANCE = 1.0e-10


@dataclass(frozen=True)
class KernelParams:
    """Shapes and scales of the two Gamma summands, stored with beta2 <= beta1."""
    nu1: float
    nu2: float
    beta1: float
    beta2: float

    def __post_init__(self):
        for name in ('nu1', 'nu2', 'beta1', 'beta2'):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise DomainError(f"{name} must be finite and > 0, got {value!r}")
        if self.beta2 > self.beta1:
            nu1, nu2, beta1, beta2 = self.nu2, self.nu1, self.beta2, self.beta1
            object.__setattr__(self, 'nu1', nu1)
            object.__setattr__(self, 'nu2', nu2)
            object.__setattr__(self, 'beta1', beta1)
            object.__setattr__(self, 'beta2', beta2)

    @property
    def shape_sum(self) -> float:
        return self.nu1 + self.nu2

    @property
    def scale_ratio(self) -> float:
        """beta2 / beta1 in (0, 1]."""
        return self.beta2 / self.beta1

    @property
    def mean(self) -> float:
        return self.nu1 * self.beta1 + self.nu2 * self.beta2


def gamma_sup_density(nu: float, beta: float) -> float:
    """
    Supremum over s of the Gamma(nu, beta) density.

    Finite only for nu >= 1, where it is attained at the mode (nu - 1) beta;
    it is nonincreasing in nu.
    """
    if nu < 1.0:
        return math.inf
    if nu == 1.0:
        return 1.0 / beta
    m = nu - 1.0
    return math.exp(m * math.log(m) - m - special.gammaln(nu) - math.log(beta))


def negative_binomial_log_weights(nu: float, p: float, k) -> np.ndarray:
    """ln[(nu)_k / k! p^nu (1 - p)^k] for integer k >= 0."""
    k = np.asarray(k, dtype=float)
    return (nu * math.log(p) + special.gammaln(nu + k) - special.gammaln(nu)
            - special.gammaln(k + 1.0) + special.xlogy(k, 1.0 - p))


def negative_binomial_tail(nu: float, p: float, k) -> np.ndarray:
    """P(K > k) for K ~ NB(nu, p): the regularized incomplete Beta I_(1-p)(k + 1, nu)."""
    k = np.asarray(k, dtype=float)
    if p >= 1.0:
        return np.zeros_like(k)
    out = special.betainc(k + 1.0, nu, 1.0 - p)
    return float(out) if out.ndim == 0 else out


def log_kernel_pdf_grid(nu1, nu2, beta1: float, beta2: float, s) -> np.ndarray:
    """
    Log-density of the Gamma convolution, broadcast over shapes and s.

    Scales are scalars; the orientation beta2 <= beta1 is applied here so
    callers may pass either order. s = 0 maps to -inf (shape sum > 1).
    """
    nu1 = np.asarray(nu1, dtype=float)
    nu2 = np.asarray(nu2, dtype=float)
    s = np.asarray(s, dtype=float)
    if beta2 > beta1:
        nu1, nu2, beta1, beta2 = nu2, nu1, beta2, beta1
    a0 = nu1 + nu2

    log_prefactor = (special.xlogy(a0 - 1.0, s) - s / beta1 - special.gammaln(a0)
                     - nu1 * math.log(beta1) - nu2 * math.log(beta2))
    z = s * (1.0 / beta1 - 1.0 / beta2)
    near_equal = np.abs(z) < NEAR_EQUAL_SCALE
    log_hyper = np.where(near_equal, 0.0, log_kummer_1f1(nu2, a0, np.where(near_equal, 0.0, z)))
    return log_prefactor + log_hyper


def kernel_pdf(k: KernelParams, s: float) -> float:
    """
    Density of Y1 + Y2 at s.

    Args:
        k: Kernel parameters
        s: Evaluation point (> 0)

    Returns:
        Nonnegative density value
    """
    if not s > 0:
        raise DomainError(f"kernel_pdf requires s > 0, got {s!r}")
    return float(np.exp(log_kernel_pdf_grid(k.nu1, k.nu2, k.beta1, k.beta2, s)))


def kernel_pdf_form(k: KernelParams, s: float, base: int) -> float:
    """
    Evaluate one of the two algebraically equivalent closed forms.

    base=1 uses the prefactor e^(-s/beta1) with 1F1(nu2; a0; s(1/beta1 - 1/beta2));
    base=2 uses e^(-s/beta2) with 1F1(nu1; a0; s(1/beta2 - 1/beta1)).
    """
    if not s > 0:
        raise DomainError(f"kernel_pdf_form requires s > 0, got {s!r}")
    a0 = k.shape_sum
    common = (a0 - 1.0) * math.log(s) - special.gammaln(a0) - k.nu1 * math.log(k.beta1) - k.nu2 * math.log(k.beta2)
    if base == 1:
        log_value = common - s / k.beta1 + log_kummer_1f1(k.nu2, a0, s * (1.0 / k.beta1 - 1.0 / k.beta2))
    elif base == 2:
        log_value = common - s / k.beta2 + log_kummer_1f1(k.nu1, a0, s * (1.0 / k.beta2 - 1.0 / k.beta1))
    else:
        raise DomainError(f"base must be 1 or 2, got {base!r}")
    return math.exp(log_value)


def kernel_cdf(k: KernelParams, s: float, tol: float = 1e-14) -> EvalResult:
    """
    Distribution function of Y1 + Y2 at s.

    Sums NB_k(nu1, beta2/beta1) P(a0 + k, s / beta2) until the remaining
    negative-binomial mass times P(a0 + K + 1, s / beta2) (which bounds every
    later P) is below tol.

    Args:
        k: Kernel parameters
        s: Evaluation point (>= 0)
        tol: Tail tolerance

    Returns:
        EvalResult with the tail bound and the k range used
    """
    if s < 0:
        raise DomainError(f"kernel_cdf requires s >= 0, got {s!r}")
    if s == 0:
        return EvalResult(0.0, 0.0, {"k": (0, 0)})

    a0 = k.shape_sum
    x = s / k.beta2
    p = k.scale_ratio
    if p >= 1.0:
        return EvalResult(float(reg_lower_gamma(a0, x)), 0.0, {"k": (0, 0)})

    partials = []
    start = 0
    while True:
        ks = np.arange(start, start + CDF_BLOCK)
        terms = np.exp(negative_binomial_log_weights(k.nu1, p, ks)) * reg_lower_gamma(a0 + ks, x)
        partials.extend(terms.tolist())
        last = start + CDF_BLOCK - 1
        bound = float(negative_binomial_tail(k.nu1, p, last)) * float(reg_lower_gamma(a0 + last + 1, x))
        if bound <= tol:
            break
        start += CDF_BLOCK
        if start >= MAX_CDF_TERMS:
            raise TruncationBudgetError(
                f"kernel CDF series exceeded {MAX_CDF_TERMS} terms", eps=tol, terms=start
            )
    value = min(math.fsum(partials), 1.0)
    return EvalResult(value, bound, {"k": (0, last)})


def kernel_pdf_oracle(k: KernelParams, s: float) -> float:
    """
    Brute-force convolution integral of the two Gamma densities.

    With u = s t the integral is s^(a0-1) / (Gamma(nu1) Gamma(nu2) beta1^nu1 beta2^nu2)
    times the integral over [0, 1] of t^(nu1-1) (1-t)^(nu2-1) e^(-s t/beta1 - s (1-t)/beta2);
    the endpoint powers go to QUADPACK's algebraic weight so shapes below one are handled.
    """
    if not s > 0:
        raise DomainError(f"kernel_pdf_oracle requires s > 0, got {s!r}")
    log_c = ((k.nu1 + k.nu2 - 1.0) * math.log(s) - log_gamma(k.nu1) - log_gamma(k.nu2)
             - k.nu1 * math.log(k.beta1) - k.nu2 * math.log(k.beta2))

    def integrand(t):
        return math.exp(log_c - s * t / k.beta1 - s * (1.0 - t) / k.beta2)

    value, abserr = integrate.quad(
        integrand, 0.0, 1.0,
        weight='alg', wvar=(k.nu1 - 1.0, k.nu2 - 1.0),
        epsabs=1e-13, epsrel=1e-12, limit=200
    )
    if abserr > ORACLE_TOLERANCE:
        raise QuadratureError("kernel convolution quadrature did not converge", achieved_error=abserr)
    return value
