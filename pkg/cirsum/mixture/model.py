"""
Sum model - two independent CIR factors observed through S = a1 X1(t+dt) + a2 X2(t+dt)
"""

import math
from dataclasses import dataclass, field
from typing import Tuple

from ..error_handler import DomainError
from ..models import CirFactor, TransitionParams, TruncationPolicy
from ..transition import transition_params
from ..truncation import PoissonWindow, poisson_window

EQUAL_SCALE_RTOL = 1.0e-12


@dataclass(frozen=True)
class SumModel:
    """Immutable model of the weighted sum; derived transition laws are recomputed on construction."""
    factor1: CirFactor
    factor2: CirFactor
    dt: float
    derived1: TransitionParams = field(init=False, repr=False, compare=False)
    derived2: TransitionParams = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not math.isfinite(self.dt) or self.dt <= 0:
            raise DomainError(f"dt must be finite and > 0, got {self.dt!r}")
        object.__setattr__(self, 'derived1', transition_params(self.factor1, self.dt))
        object.__setattr__(self, 'derived2', transition_params(self.factor2, self.dt))

    @property
    def derived(self) -> Tuple[TransitionParams, TransitionParams]:
        return self.derived1, self.derived2

    @property
    def equal_scale(self) -> bool:
        b1, b2 = self.derived1.beta, self.derived2.beta
        return abs(b1 - b2) <= EQUAL_SCALE_RTOL * max(b1, b2)

    def with_dt(self, dt: float) -> 'SumModel':
        return SumModel(self.factor1, self.factor2, dt)

    def with_factors(self, factor1: CirFactor, factor2: CirFactor) -> 'SumModel':
        return SumModel(factor1, factor2, self.dt)

    def windows(self, t: TruncationPolicy) -> Tuple[PoissonWindow, PoissonWindow]:
        """Per-factor Poisson windows with the policy's eps split."""
        return tuple(
            poisson_window(p.poisson_mean, t.factor_eps(i), t.method, t.max_terms)
            for i, p in enumerate(self.derived)
        )

    def combined_window(self, t: TruncationPolicy) -> PoissonWindow:
        """Single Poisson((lam1 + lam2) / 2) window, exact only in the equal-scale case."""
        mean = self.derived1.poisson_mean + self.derived2.poisson_mean
        return poisson_window(mean, t.eps, t.method, t.max_terms)
