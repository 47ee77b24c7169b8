"""Monte Carlo and oracle validation"""

from .compare import (
    CdfComparison,
    DensityComparison,
    OracleReport,
    cdf_comparison,
    density_comparison,
    integrated_squared_error,
    moment_check,
    oracle_crosscheck,
)
from .report import COLUMNS, Criterion, ValidationOutcome, ValidationReport, step_sweep, run_validation
from .simulate import simulate_sum

__all__ = [
    'simulate_sum',
    'density_comparison',
    'cdf_comparison',
    'moment_check',
    'oracle_crosscheck',
    'integrated_squared_error',
    'DensityComparison',
    'CdfComparison',
    'OracleReport',
    'ValidationReport',
    'ValidationOutcome',
    'Criterion',
    'COLUMNS',
    'run_validation',
    'step_sweep',
]
