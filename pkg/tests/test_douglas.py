import unittest

import numpy as np
from numpy.testing import assert_allclose

from logic.errors import DimensionMismatchError, RangeNotIncludedError
from logic.frames import alternative_solution, douglas_solve, equivalence_check, pencil_norm_sq
from logic.generator import random_unitary
from logic.linalg_core import is_unconstrained, spectral_norm


def gaussian(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


class TestDouglasSolve(unittest.TestCase):

    def test_should_return_least_norm_factor_given_diagonal_operands(self):
        # Precondition: L1 = L2 diag(1, 0.5)
        l2 = np.diag([2.0, 4.0])
        l1 = np.diag([2.0, 2.0])

        # Under test
        solution = douglas_solve(l1, l2)

        # Postcondition
        assert_allclose(solution.solution, np.diag([1.0, 0.5]), atol=1e-12)
        self.assertAlmostEqual(solution.norm_sq, 1.0)
        self.assertAlmostEqual(solution.pencil_norm_sq, 1.0)
        self.assertTrue(solution.null_match)
        self.assertTrue(solution.range_ok)

    def test_should_factor_given_constructed_pair(self):
        # Precondition: L1 = L2 R with a rank-deficient L2
        rng = np.random.default_rng(21)
        l2 = gaussian(rng, (5, 2)) @ gaussian(rng, (2, 4))
        l1 = l2 @ gaussian(rng, (4, 3))

        # Under test
        solution = douglas_solve(l1, l2)

        # Postcondition
        self.assertLess(solution.residual, 1e-9 * spectral_norm(l1))
        assert_allclose(solution.norm_sq, solution.pencil_norm_sq, rtol=1e-8)
        self.assertTrue(solution.null_match)
        self.assertTrue(solution.range_ok)

    def test_should_never_beat_reduced_solution_given_alternatives(self):
        rng = np.random.default_rng(22)
        l2 = gaussian(rng, (4, 2)) @ gaussian(rng, (2, 5))
        l1 = l2 @ gaussian(rng, (5, 2))
        reduced = douglas_solve(l1, l2)

        for _ in range(10):
            other = alternative_solution(l1, l2, gaussian(rng, (5, 2)))
            assert_allclose(l2 @ other, l1, atol=1e-9)
            self.assertGreaterEqual(spectral_norm(other) ** 2, reduced.norm_sq * (1 - 1e-9))

    def test_should_factor_given_ill_conditioned_right_operand(self):
        # Precondition: L2 has singular values 1e6, 1, 1, so L2 L2* has condition 1e12
        rng = np.random.default_rng(24)
        l2 = random_unitary(rng, 4)[:, :3] @ np.diag([1e6, 1.0, 1.0]) @ random_unitary(rng, 3)
        l1 = l2 @ gaussian(rng, (3, 3))
        l1 = l1 / spectral_norm(l1)

        # Under test
        solution = douglas_solve(l1, l2)

        # Postcondition
        self.assertTrue(solution.range_ok)
        self.assertTrue(solution.null_match)
        self.assertLess(solution.residual, 1e-9)
        assert_allclose(solution.norm_sq, pencil_norm_sq(l1, l2), rtol=1e-6)
        assert_allclose(solution.norm_sq, solution.pencil_norm_sq, rtol=1e-6)

        result = equivalence_check(l1, l2)
        self.assertTrue(result.range_included)
        self.assertTrue(result.majorized)
        self.assertTrue(result.factorizable)
        self.assertTrue(result.agree)

    def test_should_return_zero_factor_given_zero_left_operand(self):
        rng = np.random.default_rng(25)
        l2 = gaussian(rng, (3, 4))

        solution = douglas_solve(np.zeros((3, 2)), l2)

        assert_allclose(solution.solution, np.zeros((4, 2)), atol=1e-15)
        self.assertEqual(solution.norm_sq, 0.0)
        self.assertEqual(solution.pencil_norm_sq, 0.0)
        self.assertTrue(solution.null_match)

    def test_should_raise_given_range_not_included(self):
        l1 = np.array([[1.0], [0.0]])
        l2 = np.array([[0.0], [1.0]])

        with self.assertRaises(RangeNotIncludedError) as ctx:
            douglas_solve(l1, l2)
        self.assertAlmostEqual(ctx.exception.residual, 1.0)
        with self.assertRaises(RangeNotIncludedError):
            pencil_norm_sq(l1, l2)

    def test_should_raise_given_different_codomains(self):
        with self.assertRaises(DimensionMismatchError):
            douglas_solve(np.eye(2), np.eye(3))


class TestEquivalenceCheck(unittest.TestCase):

    def test_should_reject_all_three_given_orthogonal_columns(self):
        result = equivalence_check(np.array([[1.0], [0.0]]), np.array([[0.0], [1.0]]))

        self.assertFalse(result.range_included)
        self.assertFalse(result.majorized)
        self.assertFalse(result.factorizable)
        self.assertTrue(result.agree)
        self.assertTrue(is_unconstrained(result.majorization_constant))

    def test_should_accept_all_three_given_constructed_pair(self):
        rng = np.random.default_rng(23)
        l2 = gaussian(rng, (4, 3))
        l1 = l2 @ gaussian(rng, (3, 2))

        result = equivalence_check(l1, l2)

        self.assertTrue(result.range_included)
        self.assertTrue(result.majorized)
        self.assertTrue(result.factorizable)
        assert_allclose(result.majorization_constant, douglas_solve(l1, l2).norm_sq, rtol=1e-8)

    def test_should_accept_zero_left_operand_given_zero_right_operand(self):
        result = equivalence_check(np.zeros((2, 2)), np.zeros((2, 3)))

        self.assertTrue(result.range_included)
        self.assertTrue(result.majorized)
        self.assertTrue(result.factorizable)


if __name__ == '__main__':
    unittest.main()
