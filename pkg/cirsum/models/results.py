"""
Result models - evaluated values with certified truncation bounds, and moments
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Tuple


@dataclass(frozen=True)
class EvalResult:
    """A computed value and an upper bound on the error from the dropped series mass."""
    value: float
    trunc_error_bound: float
    terms_used: Dict[str, Tuple[int, int]] = field(default_factory=dict)

    def to_dict(self):
        return {
            "value": self.value,
            "trunc_error_bound": self.trunc_error_bound,
            "terms_used": {k: list(v) for k, v in self.terms_used.items()},
        }


@dataclass(frozen=True)
class Moments:
    """Mean and variance of the weighted sum."""
    mean: float
    variance: float

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)

    def __iter__(self):
        yield self.mean
        yield self.variance

    def to_dict(self):
        return {"mean": self.mean, "variance": self.variance}


def format_float(value: float) -> str:
    """Round-trippable, locale-free float text."""
    return format(float(value), '.17g')
