#!/usr/bin/env python3
"""
Run Configuration
Flat key=value configuration with defaults < config file < command-line flags
"""

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

import numpy as np
from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..error_handler import ConfigError
from ..mixture import SumModel
from ..models import CirFactor, TruncationMethod, TruncationPolicy, format_float

# key, units, description
CONFIG_KEYS: List[Tuple[str, str, str]] = [
    ('f1.kappa', '1/time', 'mean-reversion rate of factor 1'),
    ('f1.theta', 'state', 'long-run level of factor 1'),
    ('f1.sigma', 'state^(1/2)/time^(1/2)', 'volatility of factor 1'),
    ('f1.x0', 'state', 'initial state of factor 1'),
    ('f1.a', '1', 'weight a1 of factor 1 in the sum'),
    ('f2.kappa', '1/time', 'mean-reversion rate of factor 2'),
    ('f2.theta', 'state', 'long-run level of factor 2'),
    ('f2.sigma', 'state^(1/2)/time^(1/2)', 'volatility of factor 2'),
    ('f2.x0', 'state', 'initial state of factor 2'),
    ('f2.a', '1', 'weight a2 of factor 2 in the sum'),
    ('dt', 'time', 'transition step'),
    ('trunc', '-', 'truncation rule: tail | normal | window'),
    ('eps', 'probability', 'total dropped Poisson mass'),
    ('grid', 'state', 'MIN:MAX:COUNT or auto:COUNT (auto spans [0, mean + 10 std])'),
    ('seed', '-', 'master random seed (unsigned 64-bit)'),
    ('n_samples', 'draws', 'Monte Carlo sample size'),
    ('n_bins', 'bins', 'histogram bins for validation'),
    ('out', 'path', 'output file (stdout when empty)'),
    ('data', 'path', 'one-column CSV of observations (header "s") for fit'),
    ('free', '-', 'comma list of fitted parameters from kappa1,theta1,sigma1,kappa2,theta2,sigma2'),
    ('budget', 'evaluations', 'likelihood evaluation budget for fit'),
    ('n_starts', 'starts', 'Latin-hypercube starts for fit'),
    ('workers', 'threads', 'worker threads for grid evaluation and sampling'),
    ('bounds.<param>', 'param units', 'search interval LO:HI of a fitted parameter'),
]


@dataclass(frozen=True)
class GridSpec:
    """Evaluation grid: explicit [minimum, maximum] or automatic [0, mean + 10 std]."""
    count: int
    minimum: Optional[float] = None
    maximum: Optional[float] = None

    @property
    def auto(self) -> bool:
        return self.minimum is None

    @classmethod
    def parse(cls, text: str) -> 'GridSpec':
        parts = text.strip().split(':')
        try:
            if len(parts) == 2 and parts[0].lower() == 'auto':
                spec = cls(count=int(parts[1]))
            elif len(parts) == 3:
                spec = cls(count=int(parts[2]), minimum=float(parts[0]), maximum=float(parts[1]))
            else:
                raise ValueError(text)
        except ValueError:
            raise ConfigError(f"expected MIN:MAX:COUNT or auto:COUNT, got {text!r}", key='grid') from None
        if spec.count < 1:
            raise ConfigError("grid count must be >= 1", key='grid')
        if not spec.auto and not (0.0 <= spec.minimum <= spec.maximum and math.isfinite(spec.maximum)):
            raise ConfigError(f"grid bounds must satisfy 0 <= MIN <= MAX, got {text!r}", key='grid')
        return spec

    def points(self, mean: float, std: float) -> np.ndarray:
        if self.auto:
            return np.linspace(0.0, mean + 10.0 * std, self.count)
        return np.linspace(self.minimum, self.maximum, self.count)

    def __str__(self) -> str:
        if self.auto:
            return f"auto:{self.count}"
        return f"{format_float(self.minimum)}:{format_float(self.maximum)}:{self.count}"


def _parse_interval(key: str, text: Union[str, Tuple[float, float]]) -> Tuple[float, float]:
    if isinstance(text, (tuple, list)):
        return float(text[0]), float(text[1])
    try:
        lo, hi = (float(v) for v in str(text).split(':'))
    except ValueError:
        raise ConfigError(f"expected LO:HI, got {text!r}", key=key) from None
    return lo, hi


class RunConfig(BaseModel):
    """Resolved configuration of one command run."""
    model_config = ConfigDict(populate_by_name=True, extra='forbid', frozen=True)

    f1_kappa: float = Field(1.2, alias='f1.kappa', gt=0)
    f1_theta: float = Field(0.06, alias='f1.theta', gt=0)
    f1_sigma: float = Field(0.35, alias='f1.sigma', gt=0)
    f1_x0: float = Field(0.009, alias='f1.x0', ge=0)
    f1_a: float = Field(1.0, alias='f1.a', gt=0)
    f2_kappa: float = Field(1.8, alias='f2.kappa', gt=0)
    f2_theta: float = Field(0.009, alias='f2.theta', gt=0)
    f2_sigma: float = Field(0.15, alias='f2.sigma', gt=0)
    f2_x0: float = Field(0.03, alias='f2.x0', ge=0)
    f2_a: float = Field(1.0, alias='f2.a', gt=0)
    dt: float = Field(0.25, gt=0)
    trunc: TruncationMethod = TruncationMethod.TAIL
    eps: float = Field(1e-10, gt=0, lt=1)
    grid: str = 'auto:200'
    seed: int = Field(1, ge=0, lt=2 ** 64)
    n_samples: int = Field(1_000_000, ge=1)
    n_bins: int = Field(200, ge=50)
    out: Optional[str] = None
    data: Optional[str] = None
    free: Tuple[str, ...] = ()
    budget: int = Field(600, ge=100)
    n_starts: int = Field(5, ge=1)
    workers: int = Field(1, ge=1)
    bounds: Dict[str, Tuple[float, float]] = Field(default_factory=dict)

    @field_validator('grid')
    @classmethod
    def _check_grid(cls, value: str) -> str:
        return str(GridSpec.parse(value))

    @field_validator('free', mode='before')
    @classmethod
    def _split_free(cls, value: Any) -> Tuple[str, ...]:
        if value is None:
            return ()
        if isinstance(value, str):
            return tuple(v.strip() for v in value.split(',') if v.strip())
        return tuple(value)

    @field_validator('out', 'data', mode='before')
    @classmethod
    def _empty_path(cls, value: Any) -> Optional[str]:
        return value or None

    def factor1(self) -> CirFactor:
        return CirFactor(self.f1_kappa, self.f1_theta, self.f1_sigma, self.f1_x0, self.f1_a)

    def factor2(self) -> CirFactor:
        return CirFactor(self.f2_kappa, self.f2_theta, self.f2_sigma, self.f2_x0, self.f2_a)

    def model(self) -> SumModel:
        """SumModel of the configured factors and step; Feller violations surface as ConfigError."""
        try:
            f1 = self.factor1()
        except ValueError as e:
            raise ConfigError(str(e), key='f1.sigma') from e
        try:
            f2 = self.factor2()
        except ValueError as e:
            raise ConfigError(str(e), key='f2.sigma') from e
        return SumModel(f1, f2, self.dt)

    def truncation_policy(self) -> TruncationPolicy:
        return TruncationPolicy(method=self.trunc, eps=self.eps)

    def grid_spec(self) -> GridSpec:
        return GridSpec.parse(self.grid)

    def resolved_items(self) -> List[Tuple[str, str]]:
        """Every key with its resolved value as text, in documentation order."""
        dumped = self.model_dump(by_alias=True)
        items = []
        for key, _, _ in CONFIG_KEYS:
            if key == 'bounds.<param>':
                items += [(f'bounds.{name}', f"{format_float(lo)}:{format_float(hi)}")
                          for name, (lo, hi) in sorted(self.bounds.items())]
                continue
            value = dumped[key]
            if isinstance(value, float):
                text = format_float(value)
            elif isinstance(value, TruncationMethod):
                text = value.value
            elif isinstance(value, tuple):
                text = ','.join(value)
            elif value is None:
                text = ''
            else:
                text = str(value)
            items.append((key, text))
        return items


class ConfigManager:
    """
    Configuration resolution for the command-line tools.
    Loads a flat key=value file (comments with #), applies command-line
    overrides and validates the result into a RunConfig.
    """

    def __init__(self, config_path: Optional[str] = None, overrides: Optional[Mapping[str, Any]] = None):
        """
        Initialize configuration manager.

        Args:
            config_path: Path to a key=value config file
            overrides: Flag values keyed by config key; None values are ignored
        """
        self.config_path = Path(config_path) if config_path else None
        self.config: Dict[str, Any] = {}

        if self.config_path is not None:
            self._load_config_file()
        for key, value in (overrides or {}).items():
            if value is not None:
                self.set(key, value)

        self.run_config = self._validate()

    def _load_config_file(self):
        """Load key=value pairs from the config file."""
        if not self.config_path.is_file():
            raise ConfigError(f"config file not found: {self.config_path}", key='config')
        for key, value in dotenv_values(self.config_path).items():
            if value is None:
                raise ConfigError("missing value (expected key=value)", key=key)
            self.set(key, self._convert_type(value))

    def _convert_type(self, value: str) -> Union[str, int, float, bool]:
        """Convert string value to appropriate type."""
        if value.lower() in ('true', 'false'):
            return value.lower() == 'true'
        try:
            return int(value)
        except ValueError:
            pass
        try:
            return float(value)
        except ValueError:
            pass
        return value

    def get(self, key: str, default: Any = None) -> Any:
        """
        Get a raw (pre-validation) configuration value.

        Args:
            key: Dotted configuration key
            default: Default value if key not set

        Returns:
            Configuration value
        """
        return self.config.get(key, default)

    def set(self, key: str, value: Any):
        """
        Set a configuration value.

        Args:
            key: Dotted configuration key
            value: Value to set
        """
        self.config[key] = value

    def _validate(self) -> RunConfig:
        raw = {}
        bounds = {}
        for key, value in self.config.items():
            if key.startswith('bounds.'):
                bounds[key[len('bounds.'):]] = _parse_interval(key, value)
            else:
                raw[key] = str(value) if key == 'grid' else value
        if bounds:
            raw['bounds'] = bounds
        try:
            return RunConfig.model_validate(raw)
        except ValidationError as e:
            first = e.errors()[0]
            key = '.'.join(str(part) for part in first['loc'][:1]) or None
            raise ConfigError(first['msg'], key=key) from None

    def resolved_items(self) -> List[Tuple[str, str]]:
        return self.run_config.resolved_items()


def create_config_manager(config_path: Optional[str] = None, overrides: Optional[Mapping[str, Any]] = None) -> ConfigManager:
    """
    Factory function to create a configuration manager.

    Args:
        config_path: Path to a key=value config file
        overrides: Command-line overrides

    Returns:
        ConfigManager instance
    """
    return ConfigManager(config_path=config_path, overrides=overrides)
