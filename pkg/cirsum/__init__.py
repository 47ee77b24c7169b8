"""
cirsum
Exact density, distribution function, moments and Laplace transform of a
weighted sum of two independent CIR transitions, with certified truncation,
an exact Monte Carlo sampler, quadrature oracles and maximum-likelihood fitting
"""

__version__ = "1.0.0"

from .error_handler import (
    CirSumError,
    ConfigError,
    ConvergenceError,
    DegenerateSampleError,
    DomainError,
    NumericalError,
    QuadratureError,
    TruncationBudgetError,
)
from .mixture import DensityEngine, SumModel, cdf, cdf_grid, laplace_closed, laplace_series, moments, pdf, pdf_grid
from .models import CirFactor, TruncationMethod, TruncationPolicy

__all__ = [
    '__version__',
    'CirFactor',
    'SumModel',
    'TruncationMethod',
    'TruncationPolicy',
    'DensityEngine',
    'pdf',
    'pdf_grid',
    'cdf',
    'cdf_grid',
    'moments',
    'laplace_closed',
    'laplace_series',
    'CirSumError',
    'DomainError',
    'ConvergenceError',
    'TruncationBudgetError',
    'QuadratureError',
    'NumericalError',
    'DegenerateSampleError',
    'ConfigError',
]
