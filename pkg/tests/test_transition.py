"""
Unit Tests for Single-Factor Transitions
Tests CIR factor validation, transition parameters, sampling, the one-factor
density and the Poisson truncation windows
"""

import math
import sys
import unittest
from pathlib import Path

import numpy as np
from scipy import stats

sys.path.insert(0, str(Path(__file__).parent.parent))

from cirsum.error_handler import DomainError, TruncationBudgetError
from cirsum.models import CirFactor, TruncationMethod, TruncationPolicy
from cirsum.specfun import poisson_tail_quantile
from cirsum.transition import (
    check_feller,
    conditional_mean,
    conditional_variance,
    sample_transition,
    sample_transitions,
    single_factor_cdf,
    single_factor_pdf,
    single_factor_pdf_grid,
    transition_params,
)
from cirsum.truncation import poisson_window

FACTOR1 = CirFactor(kappa=1.2, theta=0.06, sigma=0.35, x0=0.009)
FACTOR2 = CirFactor(kappa=1.8, theta=0.009, sigma=0.15, x0=0.03)


class TestCirFactor(unittest.TestCase):
    """Test factor validation."""

    def test_feller(self):
        """Test the inclusive Feller check."""
        self.assertTrue(check_feller(FACTOR1))
        self.assertTrue(check_feller(FACTOR2))
        boundary = CirFactor(kappa=0.5, theta=1.0, sigma=1.0, x0=0.1)
        self.assertTrue(check_feller(boundary))

    def test_feller_violation(self):
        """Test construction fails when 2 kappa theta < sigma^2."""
        with self.assertRaises(DomainError):
            CirFactor(kappa=1.2, theta=0.06, sigma=0.7, x0=0.009)

    def test_invalid_values(self):
        """Test nonpositive and non-finite parameters."""
        with self.assertRaises(DomainError):
            CirFactor(kappa=0.0, theta=0.06, sigma=0.35, x0=0.009)
        with self.assertRaises(DomainError):
            CirFactor(kappa=1.2, theta=0.06, sigma=0.35, x0=-0.1)
        with self.assertRaises(DomainError):
            CirFactor(kappa=1.2, theta=0.06, sigma=0.35, x0=0.009, weight=0.0)
        with self.assertRaises(DomainError):
            CirFactor(kappa=math.nan, theta=0.06, sigma=0.35, x0=0.009)

    def test_replace(self):
        """Test replace revalidates."""
        self.assertEqual(FACTOR1.replace(weight=2.0).weight, 2.0)
        with self.assertRaises(DomainError):
            FACTOR1.replace(sigma=1.0)


class TestTransitionParams(unittest.TestCase):
    """Test scale, degrees of freedom and noncentrality."""

    def test_closed_forms(self):
        """Test c, d, lambda and beta for a weighted factor."""
        f = FACTOR1.replace(weight=2.5)
        p = transition_params(f, 0.25)
        decay = math.exp(-1.2 * 0.25)
        c = 0.35 ** 2 * (1 - decay) / (4 * 1.2)
        self.assertAlmostEqual(p.c, c, delta=1e-15)
        self.assertAlmostEqual(p.d, 4 * 1.2 * 0.06 / 0.35 ** 2, places=13)
        self.assertAlmostEqual(p.lam, 4 * 1.2 * decay * 0.009 / (0.35 ** 2 * (1 - decay)), places=12)
        self.assertEqual(p.beta, 2.0 * 2.5 * p.c)
        self.assertFalse(p.lambda_underflow)

    def test_moments_match_closed_form(self):
        """Test transition moments against the conditional CIR moments."""
        for dt in (0.05, 0.25, 1.0):
            p = transition_params(FACTOR2, dt)
            self.assertAlmostEqual(p.mean, conditional_mean(FACTOR2, dt), delta=1e-14)
            self.assertAlmostEqual(p.variance, conditional_variance(FACTOR2, dt), delta=1e-15)

    def test_small_step_scale(self):
        """Test c / dt approaches sigma^2 / 4 with first-order error kappa dt / 2."""
        slow = CirFactor(kappa=0.3, theta=0.06, sigma=0.15, x0=0.02)
        previous = math.inf
        for dt in (0.5, 0.1, 0.02, 0.004):
            p = transition_params(slow, dt)
            relative = abs(p.c / dt - slow.sigma ** 2 / 4) / (slow.sigma ** 2 / 4)
            self.assertLessEqual(relative, slow.kappa * dt / 2)
            self.assertLess(relative, previous)
            previous = relative
        p = transition_params(slow, 0.1)
        self.assertLess(abs(p.c / 0.1 - slow.sigma ** 2 / 4) / (slow.sigma ** 2 / 4), 0.02)

    def test_underflow(self):
        """Test exp(-kappa dt) underflow sets lambda to zero with a warning."""
        with self.assertLogs('cirsum.transition', level='WARNING'):
            p = transition_params(FACTOR1, 800.0)
        self.assertEqual(p.lam, 0.0)
        self.assertTrue(p.lambda_underflow)

    def test_invalid_step(self):
        """Test nonpositive dt."""
        for dt in (0.0, -1.0, math.inf):
            with self.assertRaises(DomainError):
                transition_params(FACTOR1, dt)


class TestSampling(unittest.TestCase):
    """Test exact transition sampling."""

    def test_reproducible(self):
        """Test identical seeds give identical draws."""
        p = transition_params(FACTOR1, 0.25)
        np.testing.assert_array_equal(sample_transitions(p, 100, 7), sample_transitions(p, 100, 7))
        self.assertIsInstance(sample_transition(p, np.random.default_rng(3)), float)

    def test_sample_moments(self):
        """Test sample mean and variance against closed forms."""
        p = transition_params(FACTOR1.replace(weight=1.5), 0.25)
        draws = sample_transitions(p, 200_000, 11)
        self.assertTrue(np.all(draws >= 0))
        se_mean = math.sqrt(p.variance / draws.size)
        self.assertLess(abs(draws.mean() - p.mean), 5 * se_mean)
        self.assertLess(abs(draws.var() / p.variance - 1.0), 0.03)

    def test_distribution(self):
        """Test draws follow the scaled noncentral chi-square."""
        p = transition_params(FACTOR2, 0.25)
        draws = sample_transitions(p, 50_000, 5)
        scale = p.weight * p.c
        result = stats.kstest(draws / scale, stats.ncx2(p.d, p.lam).cdf)
        self.assertGreater(result.pvalue, 1e-3)


class TestSingleFactorDensity(unittest.TestCase):
    """Test the one-factor Poisson-Gamma mixture."""

    def setUp(self):
        """Set up test fixtures."""
        self.policy = TruncationPolicy(eps=1e-12)

    def test_pdf_matches_noncentral_chi_square(self):
        """Test the mixture density against scipy's noncentral chi-square."""
        for f, dt in ((FACTOR1.replace(weight=2.0), 0.25), (FACTOR2, 1.0), (FACTOR2, 0.05)):
            p = transition_params(f, dt)
            scale = p.weight * p.c
            std = math.sqrt(p.variance)
            s = np.maximum(p.mean + np.linspace(-2.0, 3.0, 8) * std, 0.1 * p.mean)
            values, bound, _ = single_factor_pdf_grid(p, s, self.policy)
            reference = stats.ncx2.pdf(s / scale, p.d, p.lam) / scale
            np.testing.assert_allclose(values, reference, rtol=1e-8)
            self.assertGreaterEqual(bound, 0.0)

    def test_pdf_bound(self):
        """Test the certified bound covers the dropped mass."""
        p = transition_params(FACTOR1, 1.0)
        loose = TruncationPolicy(eps=1e-4)
        result = single_factor_pdf(p, p.mean, loose)
        scale = p.weight * p.c
        exact = stats.ncx2.pdf(p.mean / scale, p.d, p.lam) / scale
        self.assertLessEqual(abs(result.value - exact), result.trunc_error_bound + 1e-12)

    def test_cdf(self):
        """Test the distribution function against scipy."""
        p = transition_params(FACTOR1, 0.25)
        scale = p.weight * p.c
        for s in (0.5 * p.mean, p.mean, 3.0 * p.mean):
            result = single_factor_cdf(p, s, self.policy)
            self.assertAlmostEqual(result.value, stats.ncx2.cdf(s / scale, p.d, p.lam), delta=1e-10)
        self.assertEqual(single_factor_cdf(p, 0.0, self.policy).value, 0.0)

    def test_domain(self):
        """Test invalid evaluation points."""
        p = transition_params(FACTOR1, 0.25)
        with self.assertRaises(DomainError):
            single_factor_pdf(p, 0.0, self.policy)
        with self.assertRaises(DomainError):
            single_factor_cdf(p, -1.0, self.policy)


class TestPoissonWindow(unittest.TestCase):
    """Test the truncation rules."""

    MEANS = (0.3, 4.5, 60.0, 2500.0)

    def test_dropped_mass_certified(self):
        """Test every rule drops at most eps and reports it exactly."""
        for method in TruncationMethod:
            for mean in self.MEANS:
                window = poisson_window(mean, 1e-10, method)
                self.assertLessEqual(window.dropped, 1e-10)
                self.assertAlmostEqual(window.dropped_mass(), window.dropped, delta=5e-11)

    def test_tail_rule(self):
        """Test the tail rule cuts at the tail quantile."""
        window = poisson_window(60.0, 1e-10, TruncationMethod.TAIL)
        self.assertEqual(window.lo, 0)
        self.assertEqual(window.hi, poisson_tail_quantile(60.0, 1e-10))

    def test_normal_rule(self):
        """Test the normal rule never cuts tighter than the exact quantile."""
        for mean in self.MEANS:
            tail = poisson_window(mean, 1e-10, TruncationMethod.TAIL)
            normal = poisson_window(mean, 1e-10, TruncationMethod.NORMAL)
            self.assertGreaterEqual(normal.hi, tail.hi)

    def test_window_rule(self):
        """Test the weight window contains the mode and is no wider than the tail cut."""
        for mean in self.MEANS:
            window = poisson_window(mean, 1e-10, TruncationMethod.WINDOW)
            tail = poisson_window(mean, 1e-10, TruncationMethod.TAIL)
            self.assertLessEqual(window.lo, math.floor(mean))
            self.assertGreaterEqual(window.hi, math.floor(mean))
            self.assertLessEqual(window.size, tail.size)
        self.assertGreater(poisson_window(2500.0, 1e-10, TruncationMethod.WINDOW).lo, 0)

    def test_zero_mean(self):
        """Test a zero mean keeps the single index 0."""
        window = poisson_window(0.0, 1e-10)
        self.assertEqual((window.lo, window.hi, window.dropped), (0, 0, 0.0))

    def test_budget(self):
        """Test the term budget."""
        with self.assertRaises(TruncationBudgetError) as ctx:
            poisson_window(100.0, 1e-10, TruncationMethod.TAIL, max_terms=5)
        self.assertGreater(ctx.exception.terms, 5)

    def test_policy_split(self):
        """Test the per-factor eps split."""
        policy = TruncationPolicy(eps=1e-8, per_factor_split=(0.25, 0.75))
        self.assertAlmostEqual(policy.factor_eps(0), 2.5e-9)
        self.assertAlmostEqual(policy.factor_eps(1), 7.5e-9)
        self.assertEqual(TruncationPolicy(method='window').method, TruncationMethod.WINDOW)
        with self.assertRaises(DomainError):
            TruncationPolicy(eps=1.5)


if __name__ == '__main__':
    unittest.main()
