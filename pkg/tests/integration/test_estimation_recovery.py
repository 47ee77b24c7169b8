"""
Integration Tests for Parameter Recovery
Fits synthetic samples of ten thousand sums drawn from known parameters, over
the default search boxes, and checks the estimates across seeds
"""

import sys
import unittest
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from cirsum.estimation import FitSpec, fit_mle, neg_log_likelihood
from cirsum.mixture import SumModel
from cirsum.models import CirFactor
from cirsum.validation import simulate_sum

FACTOR1 = CirFactor(kappa=1.2, theta=0.06, sigma=0.35, x0=0.009)
FACTOR2 = CirFactor(kappa=1.8, theta=0.009, sigma=0.15, x0=0.03)
DT = 1.0
N_OBSERVATIONS = 10_000
SEEDS = (21, 22, 23)


class TestParameterRecovery(unittest.TestCase):
    """Test maximum-likelihood recovery on synthetic data."""

    def setUp(self):
        """Set up test fixtures."""
        model = SumModel(FACTOR1, FACTOR2, DT)
        self.samples = {seed: simulate_sum(model, N_OBSERVATIONS, seed=seed) for seed in SEEDS}

    def test_recover_rate(self):
        """Test kappa1 lands within 0.15 of 1.2 for every seed."""
        for seed, observations in self.samples.items():
            spec = FitSpec(observations, FACTOR1, FACTOR2, DT, free=('kappa1',))
            result = fit_mle(spec, seed=seed)
            self.assertLess(abs(result.point['kappa1'] - 1.2), 0.15, msg=f"seed={seed} {result.point}")
            self.assertLessEqual(result.nll, neg_log_likelihood(spec, {'kappa1': 1.2}) + 1e-6)

    def test_recover_level_and_volatility(self):
        """Test theta1 and sigma1 land within 15% for at least two of three seeds."""
        hits = []
        for seed, observations in self.samples.items():
            spec = FitSpec(observations, FACTOR1, FACTOR2, DT, free=('theta1', 'sigma1'))
            self.assertTrue(spec.bounds['sigma1'][0] < 0.35 < spec.bounds['sigma1'][1])
            self.assertTrue(spec.bounds['theta1'][0] < 0.06 < spec.bounds['theta1'][1])
            result = fit_mle(spec, seed=seed)
            hits.append(abs(result.point['theta1'] / 0.06 - 1.0) < 0.15
                        and abs(result.point['sigma1'] / 0.35 - 1.0) < 0.15)
        self.assertGreaterEqual(sum(hits), 2, msg=str(hits))


if __name__ == '__main__':
    unittest.main()
