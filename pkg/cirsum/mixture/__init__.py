"""Law of the weighted sum of two CIR transitions"""

from .density import DensityEngine, GridResult, cdf, cdf_cellwise, cdf_grid, pdf, pdf_grid
from .model import SumModel
from .series import MixtureSeries, mixture_series
from .transforms import (
    gaussian_limit_stats,
    gaussian_sup_distance,
    laplace_closed,
    laplace_series,
    moments,
)

__all__ = [
    'SumModel',
    'DensityEngine',
    'GridResult',
    'MixtureSeries',
    'mixture_series',
    'pdf',
    'pdf_grid',
    'cdf',
    'cdf_grid',
    'cdf_cellwise',
    'moments',
    'laplace_closed',
    'laplace_series',
    'gaussian_limit_stats',
    'gaussian_sup_distance',
]
