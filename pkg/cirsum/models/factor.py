"""
CIR factor models - static diffusion parameters and their per-step transition law
"""

import math
from dataclasses import dataclass, asdict

from ..error_handler import DomainError


def feller_holds(kappa: float, theta: float, sigma: float) -> bool:
    """Inclusive Feller condition 2 kappa theta >= sigma^2."""
    return 2.0 * kappa * theta >= sigma * sigma


@dataclass(frozen=True)
class CirFactor:
    """One CIR diffusion dX = kappa (theta - X) dt + sigma sqrt(X) dW, observed through a * X."""
    kappa: float
    theta: float
    sigma: float
    x0: float
    weight: float = 1.0

    def __post_init__(self):
        for name in ('kappa', 'theta', 'sigma', 'weight'):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise DomainError(f"{name} must be finite and > 0, got {value!r}")
        if not math.isfinite(self.x0) or self.x0 < 0:
            raise DomainError(f"x0 must be finite and >= 0, got {self.x0!r}")
        if not feller_holds(self.kappa, self.theta, self.sigma):
            raise DomainError(
                f"Feller condition violated: 2*kappa*theta = {2 * self.kappa * self.theta:.6g} "
                f"< sigma^2 = {self.sigma ** 2:.6g}"
            )

    def replace(self, **changes) -> 'CirFactor':
        return CirFactor(**{**asdict(self), **changes})

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class TransitionParams:
    """
    Per-step law of a * X(t + dt) given X(t) = x0: a * c * chi2(d, lam), i.e. a
    Poisson(lam / 2) mixture of Gamma(d / 2 + N, beta) with beta = 2 a c.
    """
    c: float
    d: float
    lam: float
    beta: float
    dt: float
    weight: float = 1.0
    lambda_underflow: bool = False

    @property
    def shape(self) -> float:
        return 0.5 * self.d

    @property
    def poisson_mean(self) -> float:
        return 0.5 * self.lam

    @property
    def mean(self) -> float:
        return self.weight * self.c * (self.d + self.lam)

    @property
    def variance(self) -> float:
        ac = self.weight * self.c
        return 2.0 * ac * ac * (self.d + 2.0 * self.lam)

    def to_dict(self):
        return asdict(self)
