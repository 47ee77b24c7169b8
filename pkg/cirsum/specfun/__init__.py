"""Hardened special functions"""

from .gamma import log_gamma, log_pochhammer, reg_lower_gamma, reg_upper_gamma
from .hypergeometric import kummer_1f1, log_kummer_1f1
from .logspace import LogValue
from .normal import normal_quantile, normal_upper_quantile
from .poisson import (
    poisson_log_weights,
    poisson_lower_tail,
    poisson_tail_quantile,
    poisson_upper_tail,
    poisson_weights,
)

__all__ = [
    'LogValue',
    'log_gamma',
    'log_pochhammer',
    'reg_lower_gamma',
    'reg_upper_gamma',
    'kummer_1f1',
    'log_kummer_1f1',
    'normal_quantile',
    'normal_upper_quantile',
    'poisson_log_weights',
    'poisson_weights',
    'poisson_upper_tail',
    'poisson_lower_tail',
    'poisson_tail_quantile',
]
