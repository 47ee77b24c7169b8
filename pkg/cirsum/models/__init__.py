"""Data models"""

from .factor import CirFactor, TransitionParams, feller_holds
from .results import EvalResult, Moments, format_float
from .truncation import TruncationMethod, TruncationPolicy

__all__ = [
    'CirFactor',
    'TransitionParams',
    'feller_holds',
    'EvalResult',
    'Moments',
    'format_float',
    'TruncationMethod',
    'TruncationPolicy',
]
