import unittest

import numpy as np
from numpy.testing import assert_allclose

from logic.block_space import MeasurePoints, weighted_inner
from logic.errors import DimensionMismatchError, SpaceMismatchError
from logic.frames import (
    OperatorFamily,
    analysis,
    analysis_matrix,
    canonical_dual,
    cross_operator,
    energies,
    energy,
    family_combine,
    family_sum,
    frame_bounds,
    frame_operator,
    synthesis,
    synthesis_matrix,
)
from logic.generator import operator_in_range, random_family, random_space
from logic.linalg_core import UNCONSTRAINED, adjoint, pencil_extremes


def identity_family(n=2):
    """One node of weight 1 carrying the identity on C^n."""
    return OperatorFamily(MeasurePoints(np.array([1.0]), (n,)), n, (np.eye(n),))


class TestOperators(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(3)
        self.space = random_space(self.rng, 4, 3)
        self.family = random_family(self.rng, self.space, 3)

    def test_should_be_adjoint_given_analysis_and_synthesis(self):
        # Precondition
        f = self.rng.standard_normal(3) + 1j * self.rng.standard_normal(3)
        field = analysis(random_family(self.rng, self.space, 3), self.rng.standard_normal(3))

        # Under test: <T* f, F> = <f, T F>
        left = weighted_inner(analysis(self.family, f), field)
        right = np.vdot(synthesis(self.family, field), f)

        # Postcondition
        assert_allclose(left, right, atol=1e-10)

    def test_should_equal_weighted_sum_given_frame_operator(self):
        expected = sum(mu * adjoint(b) @ b for mu, b in zip(self.space.weights, self.family.blocks))

        assert_allclose(frame_operator(self.family), expected, atol=1e-12)

    def test_should_agree_given_energy_and_frame_operator(self):
        f = self.rng.standard_normal(3) + 1j * self.rng.standard_normal(3)

        e = energy(self.family, f)

        assert_allclose(e, np.vdot(f, frame_operator(self.family) @ f).real, rtol=1e-12)
        assert_allclose(energies(self.family, f[None, :])[0], e, rtol=1e-12)

    def test_should_round_trip_given_flat_family(self):
        back = OperatorFamily.from_flat(self.space, analysis_matrix(self.family))

        for original, recovered in zip(self.family.blocks, back.blocks):
            assert_allclose(recovered, original, atol=1e-12)

    def test_should_raise_given_families_on_different_spaces(self):
        other = random_family(self.rng, random_space(self.rng, 2, 1), 3)

        with self.assertRaises(SpaceMismatchError):
            cross_operator(self.family, other)

    def test_should_add_frame_operators_given_family_sum(self):
        other = random_family(self.rng, random_space(self.rng, 2, 2), 3)

        combined = family_sum(self.family, other)

        assert_allclose(frame_operator(combined), frame_operator(self.family) + frame_operator(other), atol=1e-12)

    def test_should_compose_given_family_combine_without_second(self):
        u = np.diag([1.0, 2.0, 3.0])

        combined = family_combine(self.family, None, u)

        assert_allclose(frame_operator(combined), u @ frame_operator(self.family) @ u, atol=1e-10)


class TestFrameBounds(unittest.TestCase):

    def test_should_be_parseval_given_identity_family_and_identity_k(self):
        certificate = frame_bounds(identity_family(), np.eye(2))

        self.assertAlmostEqual(certificate.lower_bound, 1.0)
        self.assertAlmostEqual(certificate.upper_bound, 1.0)
        self.assertTrue(certificate.is_ckg_frame)
        self.assertTrue(certificate.is_tight)
        self.assertTrue(certificate.is_parseval)

    def test_should_scale_lower_bound_given_scaled_k(self):
        # Precondition: S = I, K = 2I, so A ||K* f||^2 = 4A ||f||^2 <= ||f||^2
        certificate = frame_bounds(identity_family(), 2 * np.eye(2))

        self.assertAlmostEqual(certificate.lower_bound, 0.25)
        self.assertAlmostEqual(certificate.upper_bound, 1.0)
        self.assertFalse(certificate.is_tight)
        self.assertFalse(certificate.is_parseval)

    def test_should_be_unconstrained_given_zero_operator(self):
        certificate = frame_bounds(identity_family(), np.zeros((2, 2)))

        self.assertIs(certificate.lower_bound, UNCONSTRAINED)
        self.assertTrue(certificate.is_ckg_frame)
        self.assertFalse(certificate.is_tight)

    def test_should_reject_frame_given_range_outside_frame_operator(self):
        # Precondition: the family sees only e1, K = I needs all of C^2
        space = MeasurePoints(np.array([1.0]), (1,))
        family = OperatorFamily(space, 2, (np.array([[1.0, 0.0]]),))

        certificate = frame_bounds(family, np.eye(2))

        self.assertEqual(certificate.lower_bound, 0.0)
        self.assertFalse(certificate.is_ckg_frame)
        self.assertGreater(certificate.residuals["range_inclusion"], 0.5)

    def test_should_accept_singular_s_given_k_inside_its_range(self):
        space = MeasurePoints(np.array([2.0]), (1,))
        family = OperatorFamily(space, 2, (np.array([[1.0, 0.0]]),))
        k = np.diag([1.0, 0.0])

        certificate = frame_bounds(family, k)

        self.assertAlmostEqual(certificate.lower_bound, 2.0)
        self.assertAlmostEqual(certificate.upper_bound, 2.0)
        self.assertTrue(certificate.is_ckg_frame)

    def test_should_satisfy_sandwich_given_random_family(self):
        # Precondition
        rng = np.random.default_rng(8)
        space = random_space(rng, 5, 3, min_total=4)
        family = random_family(rng, space, 4)
        k = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))

        # Under test
        certificate = frame_bounds(family, k)

        # Postcondition: A KK* <= S <= B I
        s = frame_operator(family)
        self.assertGreater(np.linalg.eigvalsh(s - certificate.lower_bound * k @ adjoint(k))[0], -1e-9)
        self.assertGreater(np.linalg.eigvalsh(certificate.upper_bound * np.eye(4) - s)[0], -1e-9)
        self.assertLess(certificate.residuals["sandwich_lower"], 1e-9)

    def test_should_report_both_bounds_given_diagonal_example(self):
        # Precondition: S = diag(1, 4), K = diag(1, 0)
        space = MeasurePoints(np.array([1.0]), (2,))
        family = OperatorFamily(space, 2, (np.diag([1.0, 2.0]),))

        certificate = frame_bounds(family, np.diag([1.0, 0.0]))

        self.assertAlmostEqual(certificate.lower_bound, 1.0)
        self.assertAlmostEqual(certificate.upper_bound, 4.0)
        self.assertTrue(certificate.is_ckg_frame)
        self.assertFalse(certificate.is_tight)
        self.assertTrue(certificate.is_bessel)
        self.assertEqual(certificate.bessel_bound, certificate.upper_bound)
        self.assertLess(certificate.residuals["sandwich_upper"], 1e-12)
        self.assertLess(certificate.residuals["sandwich_lower"], 1e-12)

    def test_should_keep_optimal_lower_bound_given_ill_conditioned_composition(self):
        # Precondition: a rank-deficient family composed with I + U^3, U = 0.3 I + 0.1 S
        rng = np.random.default_rng(91)
        family = random_family(rng, random_space(rng, 5, 3), 4, rank=3)
        k = operator_in_range(rng, family)
        u = 0.3 * np.eye(4) + 0.1 * frame_operator(family)
        composed = family.compose(np.eye(4) + np.linalg.matrix_power(u, 3))

        # Under test
        certificate = frame_bounds(composed, k)

        # Postcondition: A_opt = 1 / ||T^+ K||^2 and the Gram pencil agrees
        expected = 1.0 / np.linalg.norm(np.linalg.pinv(synthesis_matrix(composed)) @ k, 2) ** 2
        self.assertTrue(certificate.is_ckg_frame)
        assert_allclose(certificate.lower_bound, expected, rtol=1e-6)
        pencil = pencil_extremes(frame_operator(composed), k @ adjoint(k))
        assert_allclose(pencil.min_ratio, expected, rtol=1e-6)
        dual, dual_certificate = canonical_dual(composed, k)
        self.assertTrue(dual_certificate.is_valid)

    def test_should_raise_given_wrong_k_shape(self):
        with self.assertRaises(DimensionMismatchError):
            frame_bounds(identity_family(), np.eye(3))


if __name__ == '__main__':
    unittest.main()
