"""
Unit Tests for the Gamma Convolution Kernel
Tests the closed-form density, its two equivalent forms, the CDF series and
the quadrature oracle
"""

import math
import sys
import unittest
from pathlib import Path

import numpy as np
from scipy import integrate, stats

sys.path.insert(0, str(Path(__file__).parent.parent))

from cirsum.error_handler import DomainError
from cirsum.kernel import (
    KernelParams,
    gamma_sup_density,
    kernel_cdf,
    kernel_pdf,
    kernel_pdf_form,
    kernel_pdf_oracle,
    negative_binomial_log_weights,
    negative_binomial_tail,
)


class TestKernelParams(unittest.TestCase):
    """Test parameter validation and orientation."""

    def test_canonical_orientation(self):
        """Test the larger scale is stored first."""
        k = KernelParams(nu1=1.0, nu2=2.0, beta1=1.0, beta2=3.0)
        self.assertEqual((k.nu1, k.nu2, k.beta1, k.beta2), (2.0, 1.0, 3.0, 1.0))
        self.assertAlmostEqual(k.scale_ratio, 1.0 / 3.0)
        self.assertAlmostEqual(k.mean, 2.0 * 3.0 + 1.0 * 1.0)

    def test_invalid(self):
        """Test nonpositive parameters."""
        with self.assertRaises(DomainError):
            KernelParams(0.0, 1.0, 1.0, 1.0)
        with self.assertRaises(DomainError):
            KernelParams(1.0, 1.0, -1.0, 1.0)


class TestKernelDensity(unittest.TestCase):
    """Test the convolution density."""

    def test_two_exponentials(self):
        """Test Exp(mean 1) + Exp(mean 2) against its elementary density."""
        k = KernelParams(1.0, 1.0, 1.0, 2.0)
        for s in (0.1, 1.0, 4.0, 15.0):
            expected = math.exp(-s / 2.0) - math.exp(-s)
            self.assertAlmostEqual(kernel_pdf(k, s), expected, delta=1e-14 + 1e-12 * expected)

    def test_against_quadrature_oracle(self):
        """Test closed form against brute-force convolution, including shapes below one."""
        cases = [
            KernelParams(0.6, 0.8, 0.7, 0.2),
            KernelParams(2.3, 1.4, 0.01, 0.004),
            KernelParams(5.0, 12.5, 1.0, 0.3),
            KernelParams(1.17, 1.44, 0.0132, 0.0093),
        ]
        for k in cases:
            for s in (0.5 * k.mean, k.mean, 2.0 * k.mean):
                oracle = kernel_pdf_oracle(k, s)
                self.assertAlmostEqual(kernel_pdf(k, s), oracle, delta=1e-8 * max(oracle, 1e-300) + 1e-12,
                                       msg=f"{k} at s={s}")

    def test_equivalent_forms(self):
        """Test the base-beta1 and base-beta2 forms agree."""
        k = KernelParams(3.2, 2.1, 0.9, 0.4)
        for s in (0.5, 2.0, 6.0):
            first = kernel_pdf_form(k, s, 1)
            second = kernel_pdf_form(k, s, 2)
            self.assertAlmostEqual(first, second, delta=1e-10 * first)
            self.assertAlmostEqual(kernel_pdf(k, s), first, delta=1e-12 * first)
        with self.assertRaises(DomainError):
            kernel_pdf_form(k, 1.0, 3)

    def test_equal_scales(self):
        """Test equal scales collapse to a single Gamma."""
        k = KernelParams(1.5, 2.25, 0.8, 0.8)
        for s in (0.3, 2.0, 7.5):
            self.assertAlmostEqual(kernel_pdf(k, s), stats.gamma.pdf(s, 3.75, scale=0.8), places=13)

    def test_integrates_to_one(self):
        """Test total mass."""
        k = KernelParams(2.0, 3.5, 1.3, 0.6)
        total, _ = integrate.quad(lambda s: kernel_pdf(k, s), 0.0, 80.0, limit=200)
        self.assertAlmostEqual(total, 1.0, places=9)

    def test_domain(self):
        """Test s must be positive."""
        k = KernelParams(1.0, 1.0, 1.0, 2.0)
        for s in (0.0, -1.0):
            with self.assertRaises(DomainError):
                kernel_pdf(k, s)


class TestKernelCdf(unittest.TestCase):
    """Test the negative-binomial CDF series."""

    def test_two_exponentials(self):
        """Test against the elementary CDF."""
        k = KernelParams(1.0, 1.0, 1.0, 2.0)
        for s in (0.1, 1.0, 4.0, 15.0):
            expected = 1.0 - 2.0 * math.exp(-s / 2.0) + math.exp(-s)
            result = kernel_cdf(k, s)
            self.assertAlmostEqual(result.value, expected, delta=1e-12)
            self.assertLessEqual(result.trunc_error_bound, 1e-14)

    def test_matches_integrated_density(self):
        """Test the CDF equals the integral of the density."""
        k = KernelParams(0.7, 2.6, 0.5, 0.15)
        for s in (0.2, 1.0, 3.0):
            integral, _ = integrate.quad(lambda u: kernel_pdf(k, u), 0.0, s, epsabs=1e-13, limit=200)
            self.assertAlmostEqual(kernel_cdf(k, s).value, integral, delta=1e-10)

    def test_monotone(self):
        """Test the CDF is nondecreasing and tends to one."""
        k = KernelParams(3.0, 1.5, 2.0, 0.5)
        values = [kernel_cdf(k, s).value for s in np.linspace(0.0, 60.0, 25)]
        self.assertEqual(values[0], 0.0)
        self.assertTrue(all(b >= a for a, b in zip(values, values[1:])))
        self.assertAlmostEqual(values[-1], 1.0, places=10)

    def test_negative_argument(self):
        """Test s < 0 is rejected."""
        with self.assertRaises(DomainError):
            kernel_cdf(KernelParams(1.0, 1.0, 1.0, 2.0), -0.1)


SHAPE_PAIRS = [(0.6, 0.6), (1.0, 2.35), (2.35, 1.0), (17.5, 0.6), (1.0, 17.5)]
SCALE_RATIOS = [1.0, 1.001, 2.0, 50.0]


def kernel_grid():
    """Shape pairs against scale ratios, smaller scale fixed at 0.1."""
    return [KernelParams(nu1, nu2, 0.1 * ratio, 0.1) for nu1, nu2 in SHAPE_PAIRS for ratio in SCALE_RATIOS]


def kernel_std(k: KernelParams) -> float:
    return math.sqrt(k.nu1 * k.beta1 ** 2 + k.nu2 * k.beta2 ** 2)


class TestKernelGrid(unittest.TestCase):
    """Test density invariants across shapes and scale ratios."""

    def setUp(self):
        """Set up test fixtures."""
        self.cases = kernel_grid()

    def integrate(self, k: KernelParams, weight) -> float:
        upper = k.mean + 40.0 * kernel_std(k)
        total, _ = integrate.quad(lambda s: weight(s) * kernel_pdf(k, s), 0.0, upper,
                                  points=[k.mean], epsabs=1e-13, epsrel=1e-12, limit=500)
        return total

    def test_grid_size(self):
        """Test the grid covers twenty cases."""
        self.assertEqual(len(self.cases), 20)

    def test_normalization(self):
        """Test every kernel integrates to one."""
        for k in self.cases:
            self.assertAlmostEqual(self.integrate(k, lambda s: 1.0), 1.0, delta=1e-8, msg=repr(k))

    def test_mean(self):
        """Test the first moment equals nu1 beta1 + nu2 beta2."""
        for k in self.cases:
            self.assertAlmostEqual(self.integrate(k, lambda s: s), k.mean, delta=1e-7 * k.mean, msg=repr(k))

    def test_forms_agree(self):
        """Test the two algebraic forms agree, including nearly equal scales."""
        for k in self.cases:
            for s in (0.5 * k.mean, k.mean, 2.0 * k.mean):
                first = kernel_pdf_form(k, s, 1)
                second = kernel_pdf_form(k, s, 2)
                self.assertAlmostEqual(first, second, delta=1e-9 * first + 1e-300, msg=f"{k} at s={s}")

    def test_cdf_derivative(self):
        """Test the central difference of the CDF reproduces the density."""
        for k in self.cases:
            for s in (0.5 * k.mean, k.mean, 2.0 * k.mean):
                h = 1e-4 * kernel_std(k)
                slope = (kernel_cdf(k, s + h).value - kernel_cdf(k, s - h).value) / (2.0 * h)
                density = kernel_pdf(k, s)
                self.assertAlmostEqual(slope, density, delta=1e-4 * density + 1e-10, msg=f"{k} at s={s}")


class TestKernelHelpers(unittest.TestCase):
    """Test sup bounds and negative-binomial helpers."""

    def test_gamma_sup_density(self):
        """Test the density supremum is attained at the mode."""
        nu, beta = 3.5, 0.4
        mode = (nu - 1.0) * beta
        self.assertAlmostEqual(gamma_sup_density(nu, beta), stats.gamma.pdf(mode, nu, scale=beta), places=13)
        self.assertEqual(gamma_sup_density(1.0, 0.5), 2.0)
        self.assertEqual(gamma_sup_density(0.5, 1.0), math.inf)
        self.assertGreater(gamma_sup_density(2.0, 1.0), gamma_sup_density(4.0, 1.0))

    def test_negative_binomial(self):
        """Test weights and tails against scipy."""
        nu, p = 2.7, 0.35
        k = np.arange(40)
        np.testing.assert_allclose(np.exp(negative_binomial_log_weights(nu, p, k)), stats.nbinom.pmf(k, nu, p),
                                   rtol=1e-12)
        np.testing.assert_allclose(negative_binomial_tail(nu, p, k), stats.nbinom.sf(k, nu, p), rtol=1e-10)


if __name__ == '__main__':
    unittest.main()
