#!/usr/bin/env python3
"""
Command-Line Interface
Tabulate pdf/cdf/moments, simulate, validate against Monte Carlo and fit by
maximum likelihood. Results go to stdout (or --out), logs to stderr.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import pandas as pd

from . import __version__
from .config import CONFIG_KEYS, ConfigManager, RunConfig
from .error_handler import EXIT_FAILURE, EXIT_OK, CirSumError, ConfigError, create_error_handler
from .estimation import FitSpec, fit_mle
from .logging import create_logger
from .mixture import DensityEngine, cdf_grid, moments, pdf_grid
from .models import format_float
from .validation import COLUMNS, run_validation, simulate_sum

COMMANDS = ('pdf', 'cdf', 'moments', 'simulate', 'validate', 'fit')

# flag -> config key; every other flag dest already equals its key
_FACTOR_KEYS = [f'f{i}.{name}' for i in (1, 2) for name in ('kappa', 'theta', 'sigma', 'x0', 'a')]
_PLAIN_KEYS = ['dt', 'trunc', 'eps', 'grid', 'seed', 'n_samples', 'n_bins', 'out', 'data',
               'free', 'budget', 'n_starts', 'workers']


def _config_epilog() -> str:
    width = max(len(key) for key, _, _ in CONFIG_KEYS)
    lines = ['configuration keys (key=value file via --config, or the matching flag):']
    lines += [f"  {key:<{width}}  [{units}]  {description}" for key, units, description in CONFIG_KEYS]
    return '\n'.join(lines)


def _add_common_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('--config', help='key=value configuration file')
    parser.add_argument('--out', help='output file (default: stdout)')
    parser.add_argument('--log-level', default=None, help='DEBUG, INFO, WARNING (default), ERROR')
    for key in _FACTOR_KEYS:
        parser.add_argument(f'--{key}', dest=key, type=float, default=None)
    parser.add_argument('--dt', type=float, help='transition step')
    parser.add_argument('--trunc', choices=['tail', 'normal', 'window'], help='Poisson truncation rule')
    parser.add_argument('--eps', type=float, help='total dropped Poisson mass')
    parser.add_argument('--grid', help='MIN:MAX:COUNT or auto:COUNT')
    parser.add_argument('--seed', type=int, help='master random seed')
    parser.add_argument('--n-samples', dest='n_samples', type=int, help='Monte Carlo draws')
    parser.add_argument('--n-bins', dest='n_bins', type=int, help='histogram bins')
    parser.add_argument('--data', help='observations CSV with header "s" (fit)')
    parser.add_argument('--free', help='comma list of fitted parameters (fit)')
    parser.add_argument('--budget', type=int, help='likelihood evaluation budget (fit)')
    parser.add_argument('--n-starts', dest='n_starts', type=int, help='optimizer starts (fit)')
    parser.add_argument('--workers', type=int, help='worker threads')
    parser.add_argument('--engine', choices=[e.value for e in DensityEngine], default=DensityEngine.KUMMER.value,
                        help='density evaluation engine (pdf)')
    parser.add_argument('--timings', action='store_true', help='record phase timings in runtime_ms (validate)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='cirsum',
        description='Exact law of a weighted sum of two CIR transitions',
        epilog=_config_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    subparsers = parser.add_subparsers(dest='command', required=True)
    helps = {
        'pdf': 'tabulate the density on a grid (columns s, value, trunc_error_bound)',
        'cdf': 'tabulate the distribution function on a grid',
        'moments': 'print mean and variance',
        'simulate': 'draw exact Monte Carlo samples (column s)',
        'validate': 'compare the analytic law with Monte Carlo and the quadrature oracle',
        'fit': 'maximum-likelihood fit of the free parameters to observed sums',
    }
    for command in COMMANDS:
        sub = subparsers.add_parser(
            command, help=helps[command], description=helps[command],
            epilog=_config_epilog(), formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        _add_common_arguments(sub)
    return parser


def resolve_config(args: argparse.Namespace) -> ConfigManager:
    """Merge defaults, the --config file and explicit flags."""
    values = vars(args)
    overrides = {key: values.get(key) for key in _FACTOR_KEYS + _PLAIN_KEYS}
    return ConfigManager(config_path=args.config, overrides=overrides)


def _header(command: str, config: RunConfig) -> List[str]:
    lines = [f"# cirsum {command}"]
    lines += [f"# {key}={value}" for key, value in config.resolved_items()]
    return lines


def _frame_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format='%.17g', lineterminator='\n')


def _write(text: str, out: Optional[str]):
    if out:
        with open(out, 'w', encoding='utf-8', newline='\n') as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def _grid_frame(result) -> pd.DataFrame:
    return pd.DataFrame({
        's': result.s,
        'value': result.values,
        'trunc_error_bound': result.trunc_error_bound,
    })


def cmd_pdf(config: RunConfig, args: argparse.Namespace) -> int:
    m = config.model()
    stats = moments(m)
    s = config.grid_spec().points(stats.mean, stats.std)
    result = pdf_grid(m, s, config.truncation_policy(), DensityEngine(args.engine), config.workers)
    _write('\n'.join(_header('pdf', config)) + '\n' + _frame_csv(_grid_frame(result)), config.out)
    return EXIT_OK


def cmd_cdf(config: RunConfig, args: argparse.Namespace) -> int:
    m = config.model()
    stats = moments(m)
    s = config.grid_spec().points(stats.mean, stats.std)
    result = cdf_grid(m, s, config.truncation_policy(), config.workers)
    _write('\n'.join(_header('cdf', config)) + '\n' + _frame_csv(_grid_frame(result)), config.out)
    return EXIT_OK


def cmd_moments(config: RunConfig, args: argparse.Namespace) -> int:
    stats = moments(config.model())
    lines = _header('moments', config) + [
        f"mean={format_float(stats.mean)}",
        f"variance={format_float(stats.variance)}",
    ]
    _write('\n'.join(lines) + '\n', config.out)
    return EXIT_OK


def cmd_simulate(config: RunConfig, args: argparse.Namespace) -> int:
    draws = simulate_sum(config.model(), config.n_samples, config.seed, config.workers)
    _write('\n'.join(_header('simulate', config)) + '\n' + _frame_csv(pd.DataFrame({'s': draws})), config.out)
    return EXIT_OK


def cmd_validate(config: RunConfig, args: argparse.Namespace) -> int:
    outcome = run_validation(
        config.model(),
        n_samples=config.n_samples,
        n_bins=config.n_bins,
        seed=config.seed,
        t=config.truncation_policy(),
        workers=config.workers,
    )
    frame = pd.DataFrame([outcome.report.to_row(include_timings=args.timings)], columns=COLUMNS)
    _write('\n'.join(_header('validate', config)) + '\n' + _frame_csv(frame), config.out)

    lines = [c.line() for c in outcome.criteria]
    lines.append('PASS overall' if outcome.passed else 'FAIL overall')
    sys.stdout.write('\n'.join(lines) + '\n')
    sys.stdout.flush()
    return EXIT_OK if outcome.passed else EXIT_FAILURE


def _read_observations(path: Optional[str]):
    if not path:
        raise ConfigError("fit needs an observations file", key='data')
    if not Path(path).is_file():
        raise ConfigError(f"observations file not found: {path}", key='data')
    frame = pd.read_csv(path, comment='#')
    if 's' not in frame.columns:
        raise ConfigError(f"observations file needs a column 's', found {list(frame.columns)}", key='data')
    return frame['s'].to_numpy(dtype=float)


def cmd_fit(config: RunConfig, args: argparse.Namespace) -> int:
    m = config.model()
    spec = FitSpec(
        observations=_read_observations(config.data),
        factor1=m.factor1,
        factor2=m.factor2,
        dt=config.dt,
        free=config.free,
        bounds=dict(config.bounds),
        workers=config.workers,
    )
    result = fit_mle(spec, config.truncation_policy(), config.budget, config.n_starts, config.seed)

    diagnostics = pd.DataFrame([result.csv_row()], columns=result.csv_header())
    text = '\n'.join(_header('fit', config) + result.to_lines()) + '\n'
    if config.out:
        _write(text, config.out)
        out = Path(config.out)
        _write(_frame_csv(diagnostics), str(out.with_name(f"{out.stem}_diagnostics.csv")))
    else:
        _write(text + '\n' + _frame_csv(diagnostics), None)
    return EXIT_OK


_HANDLERS = {
    'pdf': cmd_pdf,
    'cdf': cmd_cdf,
    'moments': cmd_moments,
    'simulate': cmd_simulate,
    'validate': cmd_validate,
    'fit': cmd_fit,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    log = create_logger(log_level=args.log_level)
    log.set_context(command=args.command)
    errors = create_error_handler(log)

    try:
        config = resolve_config(args).run_config
        log.set_context(seed=config.seed)
        return _HANDLERS[args.command](config, args)
    except (CirSumError, OSError, ValueError) as e:
        result = errors.handle_error(e, context={'command': args.command})
        sys.stderr.write(f"cirsum {args.command}: error: {result['message']}\n")
        return result['exit_code']
    finally:
        log.clear_context()


def run(argv: Optional[Sequence[str]] = None):
    sys.exit(main(argv))


if __name__ == '__main__':
    run()
