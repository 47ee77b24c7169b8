#!/usr/bin/env python3
"""
Validation Reports
Runs the Monte Carlo and oracle checks for one parameter regime, grades them
against fixed thresholds and serializes the result as a CSV row and text block
"""

import logging
import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from ..logging import log_metric
from ..mixture import SumModel
from ..models import TruncationPolicy, format_float
from .compare import cdf_comparison, density_comparison, moment_check, oracle_crosscheck
from .simulate import simulate_sum

logger = logging.getLogger(__name__)

PARAM_COLUMNS = [
    'kappa1', 'theta1', 'sigma1', 'x01', 'a1',
    'kappa2', 'theta2', 'sigma2', 'x02', 'a2',
    'dt', 'seed',
]
COLUMNS = PARAM_COLUMNS + [
    'n_samples', 'n_bins', 'ise', 'ks_sup', 'mean_delta_sigmas', 'var_delta_sigmas', 'runtime_ms',
]

ISE_THRESHOLD = 1.0e-4
ORACLE_PDF_THRESHOLD = 1.0e-8
MOMENT_SIGMAS = 4.0
SWEEP_STEPS = (1.0, 0.25, 0.05)


@dataclass
class ValidationReport:
    """Monte Carlo versus analytic error metrics for one regime."""
    params_echo: Dict[str, float]
    n_samples: int
    n_bins: int
    ise: float
    ks_sup: float
    mean_delta_sigmas: float
    var_delta_sigmas: float
    runtime_ms: Dict[str, float] = field(default_factory=dict)
    ise_raw: float = math.nan
    ks_bound: float = 0.0
    oracle_pdf_error: float = math.nan
    oracle_cdf_error: float = math.nan

    def to_row(self, include_timings: bool = True) -> List[str]:
        """Flat CSV row in COLUMNS order."""
        row = [format_float(self.params_echo[c]) if c != 'seed' else str(int(self.params_echo[c]))
               for c in PARAM_COLUMNS]
        row += [
            str(self.n_samples),
            str(self.n_bins),
            format_float(self.ise),
            format_float(self.ks_sup),
            format_float(self.mean_delta_sigmas),
            format_float(self.var_delta_sigmas),
            ';'.join(f"{k}={v:.3f}" for k, v in self.runtime_ms.items()) if include_timings else '',
        ]
        return row

    @classmethod
    def from_row(cls, row: Sequence[str]) -> 'ValidationReport':
        """Parse a row produced by to_row."""
        values = dict(zip(COLUMNS, row))
        params = {c: float(values[c]) for c in PARAM_COLUMNS}
        params['seed'] = int(values['seed'])
        runtime = {}
        if values['runtime_ms']:
            for item in values['runtime_ms'].split(';'):
                key, _, ms = item.partition('=')
                runtime[key] = float(ms)
        return cls(
            params_echo=params,
            n_samples=int(values['n_samples']),
            n_bins=int(values['n_bins']),
            ise=float(values['ise']),
            ks_sup=float(values['ks_sup']),
            mean_delta_sigmas=float(values['mean_delta_sigmas']),
            var_delta_sigmas=float(values['var_delta_sigmas']),
            runtime_ms=runtime,
        )

    def summary(self) -> str:
        """Human-readable text block."""
        p = self.params_echo
        lines = [
            f"regime: dt={p['dt']:g} seed={int(p['seed'])} n_samples={self.n_samples} n_bins={self.n_bins}",
            f"  ise (standardized) = {self.ise:.3e}   ise (raw) = {self.ise_raw:.3e}",
            f"  ks_sup = {self.ks_sup:.3e}   (bound {self.ks_bound:.3e})",
            f"  mean delta = {self.mean_delta_sigmas:+.3f} se   variance delta = {self.var_delta_sigmas:+.3f} se",
            f"  oracle pdf error = {self.oracle_pdf_error:.3e}   oracle cdf error = {self.oracle_cdf_error:.3e}",
        ]
        if self.runtime_ms:
            lines.append('  runtime: ' + ', '.join(f"{k} {v:.0f} ms" for k, v in self.runtime_ms.items()))
        return '\n'.join(lines)


@dataclass(frozen=True)
class Criterion:
    """One graded check."""
    name: str
    value: float
    threshold: float
    passed: bool

    def line(self) -> str:
        status = 'PASS' if self.passed else 'FAIL'
        return f"{status} {self.name}: value={self.value:.6g} threshold={self.threshold:.6g}"


@dataclass
class ValidationOutcome:
    """A report and its graded criteria."""
    report: ValidationReport
    criteria: List[Criterion]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.criteria)

    def criterion(self, name: str) -> Criterion:
        return next(c for c in self.criteria if c.name == name)


@contextmanager
def _phase(timings: Dict[str, float], name: str):
    start = time.perf_counter()
    yield
    timings[name] = (time.perf_counter() - start) * 1000.0
    log_metric(logger, f"validate.{name}_ms", timings[name], tags={"phase": name})


def run_validation(
    m: SumModel,
    n_samples: int = 1_000_000,
    n_bins: int = 200,
    seed: int = 1,
    t: TruncationPolicy = TruncationPolicy(),
    workers: int = 1,
    sample_model: Optional[SumModel] = None,
    oracle: bool = True
) -> ValidationOutcome:
    """
    Simulate, compare and grade one regime.

    Args:
        m: Analytic model under test
        n_samples: Monte Carlo draws
        n_bins: Histogram bins
        seed: Master seed
        t: Truncation policy of the analytic side
        workers: Threads for sampling and grid evaluation
        sample_model: Model the draws come from (defaults to m)
        oracle: Also run the quadrature oracle cross-check

    Returns:
        ValidationOutcome with ISE, KS, oracle and moment criteria
    """
    timings: Dict[str, float] = {}
    with _phase(timings, 'sample'):
        samples = simulate_sum(sample_model or m, n_samples, seed, workers)
    with _phase(timings, 'density'):
        density = density_comparison(m, samples, n_bins, t, workers)
    with _phase(timings, 'cdf'):
        ks = cdf_comparison(m, samples, t, workers=workers)
    with _phase(timings, 'moments'):
        mean_delta, var_delta = moment_check(m, samples)
    oracle_report = None
    if oracle:
        with _phase(timings, 'oracle'):
            oracle_report = oracle_crosscheck(m)

    report = ValidationReport(
        params_echo={**_echo(m), 'seed': seed},
        n_samples=n_samples,
        n_bins=n_bins,
        ise=density.ise,
        ks_sup=ks.ks_sup,
        mean_delta_sigmas=mean_delta,
        var_delta_sigmas=var_delta,
        runtime_ms=timings,
        ise_raw=density.ise_raw,
        ks_bound=ks.bound,
        oracle_pdf_error=oracle_report.pdf_max_abs_error if oracle_report else math.nan,
        oracle_cdf_error=oracle_report.cdf_max_abs_error if oracle_report else math.nan,
    )

    criteria = [
        Criterion('ise', density.ise, ISE_THRESHOLD, density.ise < ISE_THRESHOLD),
        Criterion('ks_sup', ks.ks_sup, ks.threshold, ks.ks_sup <= ks.threshold),
        Criterion('mean_delta_sigmas', abs(mean_delta), MOMENT_SIGMAS, abs(mean_delta) <= MOMENT_SIGMAS),
        Criterion('var_delta_sigmas', abs(var_delta), MOMENT_SIGMAS, abs(var_delta) <= MOMENT_SIGMAS),
    ]
    if oracle_report is not None:
        criteria.append(Criterion('oracle_pdf', oracle_report.pdf_max_abs_error, ORACLE_PDF_THRESHOLD,
                                  oracle_report.pdf_max_abs_error <= ORACLE_PDF_THRESHOLD))
    return ValidationOutcome(report=report, criteria=criteria)


def _echo(m: SumModel) -> Dict[str, float]:
    f1, f2 = m.factor1, m.factor2
    return {
        'kappa1': f1.kappa, 'theta1': f1.theta, 'sigma1': f1.sigma, 'x01': f1.x0, 'a1': f1.weight,
        'kappa2': f2.kappa, 'theta2': f2.theta, 'sigma2': f2.sigma, 'x02': f2.x0, 'a2': f2.weight,
        'dt': m.dt,
    }


def step_sweep(
    m: SumModel,
    steps: Sequence[float] = SWEEP_STEPS,
    n_samples: int = 1_000_000,
    n_bins: int = 200,
    seed: int = 1,
    t: TruncationPolicy = TruncationPolicy(),
    workers: int = 1
) -> List[ValidationOutcome]:
    """Run the validation for each step size with the factors of m."""
    return [
        run_validation(m.with_dt(dt), n_samples, n_bins, seed, t, workers, oracle=False)
        for dt in steps
    ]
