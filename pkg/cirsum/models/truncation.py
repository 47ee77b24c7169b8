"""
Truncation policy model - how infinite Poisson sums are cut and with what tolerance
"""

from dataclasses import dataclass
from enum import Enum
from typing import Tuple

from ..error_handler import DomainError


class TruncationMethod(Enum):
    TAIL = "tail"
    NORMAL = "normal"
    WINDOW = "window"


@dataclass(frozen=True)
class TruncationPolicy:
    """Truncation method, total dropped-mass tolerance and its split across the two factors."""
    method: TruncationMethod = TruncationMethod.TAIL
    eps: float = 1e-10
    per_factor_split: Tuple[float, float] = (0.5, 0.5)
    max_terms: int = 1_000_000

    def __post_init__(self):
        if isinstance(self.method, str):
            object.__setattr__(self, 'method', TruncationMethod(self.method))
        if not (0.0 < self.eps < 1.0):
            raise DomainError(f"truncation eps must lie in (0, 1), got {self.eps!r}")
        split = tuple(float(f) for f in self.per_factor_split)
        if len(split) != 2 or min(split) <= 0 or sum(split) > 1.0 + 1e-12:
            raise DomainError(f"per_factor_split must be two positive fractions summing to <= 1, got {split}")
        object.__setattr__(self, 'per_factor_split', split)
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")

    def factor_eps(self, index: int) -> float:
        """Tolerance assigned to factor `index` (0 or 1)."""
        return self.eps * self.per_factor_split[index]

    def with_eps(self, eps: float) -> 'TruncationPolicy':
        return TruncationPolicy(self.method, eps, self.per_factor_split, self.max_terms)

    def to_dict(self):
        return {"method": self.method.value, "eps": self.eps, "per_factor_split": list(self.per_factor_split)}
