#!/usr/bin/env python3
"""
Fit Specification
Observed sums, the free subset of rate/level/volatility parameters and a
Feller-consistent search box
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Mapping, Sequence, Tuple

import numpy as np

from ..error_handler import ConfigError
from ..mixture import SumModel
from ..models import CirFactor

logger = logging.getLogger(__name__)

PARAMETER_NAMES = ('kappa1', 'theta1', 'sigma1', 'kappa2', 'theta2', 'sigma2')
DEFAULT_BOUNDS = {
    'kappa': (0.05, 10.0),
    'theta': (1.0e-4, 1.0),
    'sigma': (1.0e-2, 2.0),
}
FELLER_MARGIN = 1.0e-12


def _split(name: str) -> Tuple[str, int]:
    return name[:-1], int(name[-1])


@dataclass
class FitSpec:
    """
    Maximum-likelihood problem on i.i.d. draws of S for a known step, initial
    states and weights. Parameters outside `free` keep the values of the
    template factors.
    """
    observations: np.ndarray
    factor1: CirFactor
    factor2: CirFactor
    dt: float
    free: Tuple[str, ...] = ()
    bounds: Dict[str, Tuple[float, float]] = field(default_factory=dict)
    workers: int = 1

    def __post_init__(self):
        obs = np.asarray(self.observations, dtype=float).ravel()
        if obs.size == 0:
            raise ConfigError("no observations", key='data')
        if np.any(~np.isfinite(obs)) or np.any(obs <= 0):
            raise ConfigError("observations must be finite and > 0", key='data')
        self.observations = obs

        free = tuple(dict.fromkeys(self.free))
        unknown = [n for n in free if n not in PARAMETER_NAMES]
        if unknown:
            raise ConfigError(f"unknown parameters {unknown}; choose from {list(PARAMETER_NAMES)}", key='free')
        self.free = tuple(n for n in PARAMETER_NAMES if n in free)

        box = {}
        for name in self.free:
            lo, hi = self.bounds.get(name, DEFAULT_BOUNDS[_split(name)[0]])
            if not (0 < lo < hi) or not math.isfinite(hi):
                raise ConfigError(f"invalid interval ({lo}, {hi})", key=f'bounds.{name}')
            box[name] = (float(lo), float(hi))
        self.bounds = box
        for index in (1, 2):
            self._shrink_to_feller(index)

    @property
    def fixed_values(self) -> Dict[str, float]:
        values = {}
        for index, f in ((1, self.factor1), (2, self.factor2)):
            values[f'kappa{index}'] = f.kappa
            values[f'theta{index}'] = f.theta
            values[f'sigma{index}'] = f.sigma
        return values

    def _range(self, name: str) -> Tuple[float, float]:
        if name in self.bounds:
            return self.bounds[name]
        value = self.fixed_values[name]
        return value, value

    def _shrink_to_feller(self, index: int):
        """
        Shrink the box so that every point satisfies 2 kappa theta >= sigma^2.

        The worst corner is (kappa_lo, theta_lo, sigma_hi). The log deficit at
        that corner is shared between the free parameters in proportion to how
        far each can move before crossing the template value, so the template
        point stays inside the box.
        """
        names = {'kappa': f'kappa{index}', 'theta': f'theta{index}', 'sigma': f'sigma{index}'}
        template = self.fixed_values
        k_lo, k_hi = self._range(names['kappa'])
        t_lo, t_hi = self._range(names['theta'])
        s_lo, s_hi = self._range(names['sigma'])
        if s_hi * s_hi <= 2.0 * k_lo * t_lo * (1.0 - FELLER_MARGIN):
            return

        deficit = 2.0 * math.log(s_hi) - math.log(2.0 * k_lo * t_lo) + 4.0 * FELLER_MARGIN
        room = {
            'kappa': max(math.log(min(template[names['kappa']], k_hi) / k_lo), 0.0),
            'theta': max(math.log(min(template[names['theta']], t_hi) / t_lo), 0.0),
            'sigma': max(2.0 * math.log(s_hi / max(template[names['sigma']], s_lo)), 0.0),
        }
        movable = [p for p in ('sigma', 'theta', 'kappa') if names[p] in self.bounds]
        if not movable:
            raise ConfigError("fixed parameters violate the Feller condition", key=names['sigma'])
        start_inside = {p: self.bounds[names[p]][0] <= template[names[p]] <= self.bounds[names[p]][1]
                        for p in movable}
        total = sum(room[p] for p in movable)
        if total < deficit:
            raise ConfigError(
                f"no {'/'.join(names[p] for p in movable)} box around the starting values "
                "satisfies the Feller condition",
                key=f"bounds.{names[movable[0]]}",
            )

        share = deficit / total
        if 'kappa' in movable:
            k_lo = k_lo * math.exp(share * room['kappa'])
            self.bounds[names['kappa']] = (k_lo, k_hi)
        if 'theta' in movable:
            t_lo = t_lo * math.exp(share * room['theta'])
            self.bounds[names['theta']] = (t_lo, t_hi)
        if 'sigma' in movable:
            s_hi = min(s_hi * math.exp(-0.5 * share * room['sigma']),
                       math.sqrt(2.0 * k_lo * t_lo) * (1.0 - FELLER_MARGIN))
            self.bounds[names['sigma']] = (s_lo, s_hi)
        elif s_hi * s_hi > 2.0 * k_lo * t_lo:
            lower = names['theta'] if 'theta' in movable else names['kappa']
            lo, hi = self.bounds[lower]
            lo = max(lo, s_hi * s_hi / (2.0 * (t_lo if lower == names['kappa'] else k_lo)) * (1.0 + FELLER_MARGIN))
            self.bounds[lower] = (lo, hi)

        for p in movable:
            lo, hi = self.bounds[names[p]]
            if not lo < hi:
                raise ConfigError("Feller shrink left an empty interval", key=f'bounds.{names[p]}')
            if not lo <= template[names[p]] <= hi and start_inside[p]:
                raise ConfigError(f"starting value {template[names[p]]} sits on the Feller boundary",
                                  key=f'bounds.{names[p]}')
        logger.info("factor %d box shrunk for the Feller condition: %s", index,
                    {names[p]: self.bounds[names[p]] for p in movable})

    @property
    def log_bounds(self) -> Sequence[Tuple[float, float]]:
        return [(math.log(self.bounds[n][0]), math.log(self.bounds[n][1])) for n in self.free]

    def point_from_log(self, y: Sequence[float]) -> Dict[str, float]:
        """Free-parameter dict from a log-space vector, clipped into the box."""
        point = {}
        for name, value in zip(self.free, y):
            lo, hi = self.bounds[name]
            point[name] = min(max(math.exp(value), lo), hi)
        return point

    def model_at(self, point: Mapping[str, float]) -> SumModel:
        """SumModel with the free parameters set from `point`."""
        values = {**self.fixed_values, **point}
        f1 = self.factor1.replace(kappa=values['kappa1'], theta=values['theta1'], sigma=values['sigma1'])
        f2 = self.factor2.replace(kappa=values['kappa2'], theta=values['theta2'], sigma=values['sigma2'])
        return SumModel(f1, f2, self.dt)

    def with_observations(self, observations) -> 'FitSpec':
        return FitSpec(observations, self.factor1, self.factor2, self.dt, self.free, dict(self.bounds), self.workers)
