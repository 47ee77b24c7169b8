"""
Integration Tests for the Command-Line Interface
Tests every command end to end through main(), output files, determinism
and exit codes
"""

import contextlib
import io
import sys
import tempfile
import unittest
from pathlib import Path

import pandas as pd

sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from cirsum.cli import main
from cirsum.config import CONFIG_KEYS
from cirsum.error_handler import EXIT_CONFIG, EXIT_FAILURE, EXIT_OK
from cirsum.mixture import SumModel, moments
from cirsum.models import CirFactor


def run_cli(*argv):
    """Run main() capturing stdout and stderr."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


class TestCli(unittest.TestCase):
    """Test the command-line surface."""

    def setUp(self):
        """Set up test fixtures."""
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def read_table(self, path: Path) -> pd.DataFrame:
        return pd.read_csv(path, comment='#')

    def test_pdf(self):
        """Test the pdf table and its header."""
        out = self.dir / "pdf.csv"
        code, _, _ = run_cli('pdf', '--grid', 'auto:21', '--out', str(out))
        self.assertEqual(code, EXIT_OK)
        text = out.read_text(encoding='utf-8')
        self.assertTrue(text.startswith("# cirsum pdf\n"))
        self.assertIn("# grid=auto:21\n", text)
        frame = self.read_table(out)
        self.assertEqual(list(frame.columns), ['s', 'value', 'trunc_error_bound'])
        self.assertEqual(len(frame), 21)
        self.assertEqual(frame['value'].iloc[0], 0.0)
        self.assertTrue((frame['value'] >= 0).all())

    def test_cdf(self):
        """Test the cdf table starts at 0 and ends near 1."""
        out = self.dir / "cdf.csv"
        code, _, _ = run_cli('cdf', '--grid', 'auto:11', '--trunc', 'window', '--out', str(out))
        self.assertEqual(code, EXIT_OK)
        frame = self.read_table(out)
        self.assertEqual(frame['s'].iloc[0], 0.0)
        self.assertEqual(frame['value'].iloc[0], 0.0)
        self.assertTrue(frame['value'].is_monotonic_increasing)
        self.assertGreater(frame['value'].iloc[-1], 1.0 - 1e-6)

    def test_moments_stdout(self):
        """Test moments printed to stdout."""
        code, stdout, _ = run_cli('moments', '--dt', '1.0', '--f1.a', '2.0')
        self.assertEqual(code, EXIT_OK)
        values = dict(line.split('=', 1) for line in stdout.splitlines() if not line.startswith('#'))
        model = SumModel(CirFactor(1.2, 0.06, 0.35, 0.009, 2.0), CirFactor(1.8, 0.009, 0.15, 0.03), 1.0)
        self.assertEqual(float(values['mean']), moments(model).mean)
        self.assertEqual(float(values['variance']), moments(model).variance)

    def test_simulate_reproducible(self):
        """Test reruns with the same seed are byte-identical."""
        first, second = self.dir / "a.csv", self.dir / "b.csv"
        for path in (first, second):
            code, _, _ = run_cli('simulate', '--n-samples', '2000', '--seed', '3', '--out', str(path))
            self.assertEqual(code, EXIT_OK)
        self.assertEqual(first.read_bytes(), second.read_bytes())
        frame = self.read_table(first)
        self.assertEqual(list(frame.columns), ['s'])
        self.assertEqual(len(frame), 2000)

    def test_config_file(self):
        """Test a config file is applied and flags override it."""
        config = self.dir / "run.cfg"
        config.write_text("dt=1.0\neps=1e-8\n", encoding='utf-8')
        code, stdout, _ = run_cli('moments', '--config', str(config), '--eps', '1e-6')
        self.assertEqual(code, EXIT_OK)
        self.assertIn("# dt=1\n", stdout)
        self.assertIn("# eps=9.9999999999999995e-07\n", stdout)

    def test_config_errors(self):
        """Test invalid configuration exits with code 2."""
        for argv in (('pdf', '--dt', '0'),
                     ('pdf', '--grid', 'auto'),
                     ('pdf', '--f1.sigma', '0.7'),
                     ('moments', '--config', str(self.dir / "absent.cfg")),
                     ('fit', '--free', 'kappa1')):
            code, _, stderr = run_cli(*argv)
            self.assertEqual(code, EXIT_CONFIG, msg=argv)
            self.assertIn(f"cirsum {argv[0]}: error:", stderr)

    def test_help_lists_keys(self):
        """Test --help documents every configuration key."""
        out = io.StringIO()
        with contextlib.redirect_stdout(out), self.assertRaises(SystemExit) as ctx:
            main(['pdf', '--help'])
        self.assertEqual(ctx.exception.code, 0)
        for key, units, _ in CONFIG_KEYS:
            self.assertIn(key, out.getvalue())

    def test_validate(self):
        """Test validate writes a report row and grades it."""
        out = self.dir / "validate.csv"
        code, stdout, _ = run_cli('validate', '--n-samples', '200000', '--n-bins', '100', '--out', str(out))
        self.assertIn(code, (EXIT_OK, EXIT_FAILURE))
        lines = stdout.splitlines()
        self.assertEqual(lines[-1], 'PASS overall' if code == EXIT_OK else 'FAIL overall')
        self.assertTrue(any(line.startswith(('PASS ise', 'FAIL ise')) for line in lines))
        frame = self.read_table(out)
        self.assertEqual(len(frame), 1)
        self.assertEqual(int(frame['n_samples'].iloc[0]), 200000)
        self.assertTrue(frame['runtime_ms'].isna().all())

    def test_fit(self):
        """Test fit writes estimates and a diagnostics table."""
        data = self.dir / "obs.csv"
        code, _, _ = run_cli('simulate', '--dt', '1.0', '--n-samples', '300', '--seed', '8', '--out', str(data))
        self.assertEqual(code, EXIT_OK)

        out = self.dir / "fit.txt"
        code, _, _ = run_cli('fit', '--dt', '1.0', '--data', str(data), '--free', 'kappa1',
                             '--budget', '100', '--n-starts', '2', '--out', str(out))
        self.assertEqual(code, EXIT_OK)
        values = dict(line.split('=', 1) for line in out.read_text(encoding='utf-8').splitlines()
                      if not line.startswith('#'))
        self.assertIn('kappa1', values)
        self.assertIn(values['stop_reason'], ('converged', 'budget_exhausted'))
        diagnostics = self.read_table(self.dir / "fit_diagnostics.csv")
        self.assertEqual(list(diagnostics.columns)[:2], ['kappa1', 'nll'])


if __name__ == '__main__':
    unittest.main()
