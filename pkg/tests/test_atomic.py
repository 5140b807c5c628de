import unittest

import numpy as np
from numpy.testing import assert_allclose

from logic.block_space import flatten
from logic.errors import HypothesisFailedError, NotAtomicError
from logic.frames import (
    OperatorFamily,
    atomic_check,
    coefficient_map,
    frame_bounds,
    frame_operator,
    operator_algebra_bounds,
    orthogonal_combine,
    positive_perturb,
    range_combine,
    synthesis,
)
from logic.generator import (
    annihilating_family,
    intersection_projector,
    operator_in_range,
    orthogonal_pair,
    random_family,
    random_space,
    random_unitary,
)
from logic.linalg_core import adjoint, is_unconstrained, spectral_norm


def gaussian(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


class TestAtomicCheck(unittest.TestCase):

    def test_should_agree_with_frame_test_given_ckg_frame(self):
        # Precondition
        rng = np.random.default_rng(61)
        family = random_family(rng, random_space(rng, 5, 3), 4, rank=2)
        k = operator_in_range(rng, family)

        # Under test
        certificate = atomic_check(family, k)

        # Postcondition
        self.assertTrue(certificate.is_atomic)
        self.assertTrue(certificate.is_ckg_frame)
        self.assertTrue(certificate.equivalence_agrees)
        assert_allclose(certificate.bound_product, 1.0, rtol=1e-6)

    def test_should_agree_with_frame_test_given_planted_violation(self):
        rng = np.random.default_rng(62)
        family, _ = annihilating_family(rng, random_space(rng, 6, 3), 4)

        certificate = atomic_check(family, gaussian(rng, (4, 4)))

        self.assertFalse(certificate.is_atomic)
        self.assertFalse(certificate.is_ckg_frame)
        self.assertTrue(certificate.equivalence_agrees)
        self.assertIsNone(certificate.minimal_C)

    def test_should_reproduce_k_f_given_least_norm_coefficients(self):
        rng = np.random.default_rng(63)
        family = random_family(rng, random_space(rng, 6, 2), 3)
        k = operator_in_range(rng, family)
        certificate = atomic_check(family, k)

        for _ in range(5):
            f = gaussian(rng, 3)
            coefficients = coefficient_map(family, k, f)
            assert_allclose(synthesis(family, coefficients), k @ f, atol=1e-9)
            self.assertLessEqual(np.linalg.norm(flatten(coefficients)),
                                 certificate.minimal_C * np.linalg.norm(f) * (1 + 1e-9))

    def test_should_raise_not_atomic_given_planted_violation(self):
        rng = np.random.default_rng(64)
        family, _ = annihilating_family(rng, random_space(rng, 4, 2), 3)

        with self.assertRaises(NotAtomicError):
            coefficient_map(family, np.eye(3), np.ones(3))


class TestOperatorAlgebra(unittest.TestCase):

    def setUp(self):
        rng = np.random.default_rng(71)
        self.rng = rng
        self.family = random_family(rng, random_space(rng, 5, 3, min_total=4), 4)
        self.lowest = float(np.linalg.eigvalsh(frame_operator(self.family))[0])

    def test_should_dominate_formulas_given_random_operators(self):
        k1 = gaussian(self.rng, (4, 4))
        k2 = gaussian(self.rng, (4, 4))

        result = operator_algebra_bounds(self.family, k1, k2, 1.5, -0.5)

        self.assertTrue(result.holds)
        self.assertTrue(result.sum_result.holds)
        self.assertTrue(result.product_result.holds)

    def test_should_give_a_quarter_given_identity_operators(self):
        # Precondition: K1 = K2 = I, alpha = beta = 1
        identity = np.eye(4)

        # Under test
        result = operator_algebra_bounds(self.family, identity, identity, 1.0, 1.0)

        # Postcondition: predicted A/4 is the optimal bound for 2I
        assert_allclose(result.sum_result.formula_lower_bound, self.lowest / 4, rtol=1e-9)
        assert_allclose(result.sum_result.certificate.lower_bound, self.lowest / 4, rtol=1e-9)

    def test_should_keep_first_bound_given_unitary_second_operator(self):
        k1 = gaussian(self.rng, (4, 4))
        unitary = random_unitary(self.rng, 4)

        product = operator_algebra_bounds(self.family, k1, unitary, 1.0, 1.0).product_result

        assert_allclose(product.certificate.lower_bound, product.formula_lower_bound, rtol=1e-9)

    def test_should_raise_given_zero_scalar(self):
        with self.assertRaises(HypothesisFailedError) as ctx:
            operator_algebra_bounds(self.family, np.eye(4), np.eye(4), 0.0, 1.0)
        self.assertEqual(ctx.exception.item, "scalars")


class TestCombinations(unittest.TestCase):

    def setUp(self):
        rng = np.random.default_rng(81)
        self.rng = rng
        self.lam, self.gam = orthogonal_pair(rng, 8, 3, 3, min_total=3)
        k = intersection_projector(self.lam, self.gam) @ gaussian(rng, (3, 3))
        self.k = k / spectral_norm(k)

    def test_should_keep_scaled_lower_bound_given_orthogonal_pair(self):
        # Precondition: U = I + c K* commutes with K*
        u = np.eye(3) + 0.3 * adjoint(self.k)
        v = gaussian(self.rng, (3, 3))

        # Under test
        result = orthogonal_combine(self.lam, self.gam, u, v, self.k)

        # Postcondition
        self.assertTrue(result.holds)
        self.assertLess(result.residuals["orthogonality"], 1e-9)
        self.assertLess(result.residuals["cross_term"], 1e-9)

    def test_should_keep_bound_given_zero_second_family(self):
        zeros = OperatorFamily.zeros(self.lam.space, 3)

        result = orthogonal_combine(self.lam, zeros, np.eye(3), np.zeros((3, 3)), self.k)

        self.assertTrue(result.holds)
        assert_allclose(result.formula_lower_bound, result.certificate.lower_bound, rtol=1e-9)

    def test_should_raise_given_non_orthogonal_families(self):
        with self.assertRaises(HypothesisFailedError) as ctx:
            orthogonal_combine(self.lam, self.lam, np.eye(3), np.eye(3), self.k)
        self.assertEqual(ctx.exception.item, "orthogonality")

    def test_should_raise_given_non_commuting_u(self):
        # Precondition: K is a generic full-rank operator here
        k = gaussian(self.rng, (3, 3))
        u = np.diag([1.0, 2.0, 3.0])

        with self.assertRaises(HypothesisFailedError) as ctx:
            orthogonal_combine(self.lam, self.gam, u, np.eye(3), k)
        self.assertEqual(ctx.exception.item, "commuting")

    def test_should_hold_given_range_combination(self):
        u1 = np.eye(3) + 0.5 * frame_operator(self.lam)
        u2 = np.eye(3) + 0.2 * frame_operator(self.gam)

        result = range_combine(self.lam, self.gam, u1, u2, self.k)

        self.assertTrue(result.holds)
        self.assertFalse(is_unconstrained(result.formula_lower_bound))

    def test_should_raise_given_u_collapsing_range(self):
        collapse = np.zeros((3, 3))
        collapse[0, 0] = 1.0

        with self.assertRaises(HypothesisFailedError) as ctx:
            range_combine(self.lam, self.gam, collapse, np.eye(3), self.k)
        self.assertEqual(ctx.exception.item, "range-1")


class TestPositivePerturb(unittest.TestCase):

    def setUp(self):
        rng = np.random.default_rng(91)
        self.family = random_family(rng, random_space(rng, 5, 3), 4, rank=3)
        self.k = operator_in_range(rng, self.family)
        self.s = frame_operator(self.family)

    def test_should_dominate_frame_operator_given_polynomial_in_s(self):
        u = 0.3 * np.eye(4) + 0.1 * self.s

        for power in (1, 2, 3):
            result = positive_perturb(self.family, u, power, self.k)
            self.assertTrue(result.holds)
            self.assertLess(result.residuals["domination"], 1e-9)

    def test_should_quadruple_frame_operator_given_identity_u(self):
        # Precondition: I + U = 2I
        base = frame_bounds(self.family, self.k)

        # Under test
        result = positive_perturb(self.family, np.eye(4), 1, self.k)

        # Postcondition
        self.assertTrue(result.holds)
        assert_allclose(frame_operator(result.family), 4 * self.s, atol=1e-10)
        assert_allclose(result.certificate.lower_bound, 4 * base.lower_bound, rtol=1e-8)
        assert_allclose(result.formula_lower_bound, base.lower_bound, rtol=1e-12)

    def test_should_raise_given_non_positive_or_non_commuting_u(self):
        with self.assertRaises(HypothesisFailedError) as ctx:
            positive_perturb(self.family, -np.eye(4), 1, self.k)
        self.assertEqual(ctx.exception.item, "positive")

        with self.assertRaises(HypothesisFailedError) as ctx:
            positive_perturb(self.family, np.diag([1.0, 2.0, 3.0, 4.0]), 1, self.k)
        self.assertEqual(ctx.exception.item, "commuting")

    def test_should_raise_given_non_integer_power(self):
        with self.assertRaises(HypothesisFailedError) as ctx:
            positive_perturb(self.family, np.eye(4), 0, self.k)
        self.assertEqual(ctx.exception.item, "power")


if __name__ == '__main__':
    unittest.main()
