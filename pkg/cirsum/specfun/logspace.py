#!/usr/bin/env python3
"""
Log-Space Values
Signed log-magnitude carrier used to compose Gamma products, scale powers and
series terms without overflow
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Union

from ..error_handler import DomainError

Number = Union[int, float]


@dataclass(frozen=True)
class LogValue:
    """
    A real number stored as (ln|x|, sign).

    sign is +1, -1 or 0; a zero value ignores its log_magnitude. Values built
    from a float keep that float so to_float returns it unchanged.
    """
    log_magnitude: float
    sign: int = 1
    exact: Optional[float] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise DomainError(f"LogValue sign must be -1, 0 or +1, got {self.sign}")
        if self.sign != 0 and math.isnan(self.log_magnitude):
            raise DomainError("LogValue log_magnitude is NaN")

    @classmethod
    def zero(cls) -> 'LogValue':
        return cls(-math.inf, 0)

    @classmethod
    def from_float(cls, value: Number) -> 'LogValue':
        """Convert a finite real to log-space."""
        if not math.isfinite(value):
            raise DomainError(f"cannot represent non-finite value {value!r}")
        if value == 0:
            return cls.zero()
        return cls(math.log(abs(value)), 1 if value > 0 else -1, float(value))

    @classmethod
    def from_log(cls, log_magnitude: float) -> 'LogValue':
        """Positive value with the given natural log (-inf maps to zero)."""
        if log_magnitude == -math.inf:
            return cls.zero()
        return cls(float(log_magnitude), 1)

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def to_float(self) -> float:
        """Exponentiate back to a float (may overflow to inf or underflow to 0)."""
        if self.sign == 0:
            return 0.0
        if self.exact is not None:
            return self.exact
        try:
            return self.sign * math.exp(self.log_magnitude)
        except OverflowError:
            return self.sign * math.inf

    def __neg__(self) -> 'LogValue':
        exact = None if self.exact is None else -self.exact
        return LogValue(self.log_magnitude, -self.sign, exact)

    def __mul__(self, other: Union['LogValue', Number]) -> 'LogValue':
        if not isinstance(other, LogValue):
            other = LogValue.from_float(other)
        if self.sign == 0 or other.sign == 0:
            return LogValue.zero()
        return LogValue(self.log_magnitude + other.log_magnitude, self.sign * other.sign)

    __rmul__ = __mul__

    def __truediv__(self, other: Union['LogValue', Number]) -> 'LogValue':
        if not isinstance(other, LogValue):
            other = LogValue.from_float(other)
        if other.sign == 0:
            raise DomainError("division of LogValue by zero")
        if self.sign == 0:
            return LogValue.zero()
        return LogValue(self.log_magnitude - other.log_magnitude, self.sign * other.sign)

    def __add__(self, other: Union['LogValue', Number]) -> 'LogValue':
        if not isinstance(other, LogValue):
            other = LogValue.from_float(other)
        if other.sign == 0:
            return self
        if self.sign == 0:
            return other
        big, small = (self, other) if self.log_magnitude >= other.log_magnitude else (other, self)
        ratio = math.exp(small.log_magnitude - big.log_magnitude)
        if big.sign == small.sign:
            return LogValue(big.log_magnitude + math.log1p(ratio), big.sign)
        if ratio == 1.0:
            return LogValue.zero()
        return LogValue(big.log_magnitude + math.log1p(-ratio), big.sign)

    __radd__ = __add__

    def __sub__(self, other: Union['LogValue', Number]) -> 'LogValue':
        if not isinstance(other, LogValue):
            other = LogValue.from_float(other)
        return self + (-other)
