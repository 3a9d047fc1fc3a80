import math
import unittest
from typing import Optional

import numpy as np

from duffing_atlas.core.errors import InvalidParameters
from duffing_atlas.model.field import (
    canonical_first_integral,
    canonical_rescaled_field,
    dissipation_rate,
    divergence,
    eval_field,
    int_power,
    jacobian,
    numeric_jacobian,
    potential_critical_points,
    potential_derivative,
    potential_energy,
    to_canonical,
    total_energy,
)
from duffing_atlas.model.parameters import Parameters, PlaneState, degeneracy_flags


class ParameterValidationTests(unittest.TestCase):
    def test_zero_epsilon_is_rejected(self) -> None:
        with self.assertRaises(InvalidParameters):
            Parameters(alpha=0.0, epsilon=0.0, sigma=1.0, m=3)

    def test_degree_must_be_a_positive_integer(self) -> None:
        for bad in (0, -2, 2.0, True):
            with self.subTest(m=bad):
                with self.assertRaises(InvalidParameters):
                    Parameters(alpha=0.0, epsilon=1.0, sigma=1.0, m=bad)

    def test_non_finite_coefficients_are_rejected(self) -> None:
        with self.assertRaises(InvalidParameters):
            Parameters(alpha=float("nan"), epsilon=1.0, sigma=1.0, m=3)
        with self.assertRaises(InvalidParameters):
            Parameters(alpha=0.0, epsilon=1.0, sigma=float("inf"), m=3)

    def test_integer_coefficients_are_stored_as_floats(self) -> None:
        p = Parameters(alpha=0, epsilon=2, sigma=-1, m=2)
        self.assertIsInstance(p.alpha, float)
        self.assertEqual(p.to_dict(), {"alpha": 0.0, "epsilon": 2.0, "sigma": -1.0, "m": 2})

    def test_linear_stiffness_folds_epsilon_for_m1(self) -> None:
        self.assertEqual(Parameters(alpha=3.0, epsilon=1.5, sigma=0.5, m=1).stiffness, 2.0)
        self.assertEqual(Parameters(alpha=3.0, epsilon=1.5, sigma=0.5, m=3).stiffness, 0.5)

    def test_plane_state_rejects_non_finite(self) -> None:
        with self.assertRaises(InvalidParameters):
            PlaneState(float("inf"), 0.0)


class FieldTests(unittest.TestCase):
    def test_int_power_is_sign_correct(self) -> None:
        self.assertEqual(int_power(-2.0, 3), -8.0)
        self.assertEqual(int_power(-2.0, 4), 16.0)
        self.assertEqual(int_power(5.0, 0), 1.0)

    def test_eval_field_examples(self) -> None:
        self.assertEqual(eval_field(Parameters(0.0, 1.0, 1.0, 3), PlaneState(0.0, 0.0)), (0.0, 0.0))
        self.assertEqual(eval_field(Parameters(0.0, -1.0, 1.0, 3), PlaneState(1.0, 0.0)), (0.0, 0.0))
        self.assertEqual(eval_field(Parameters(2.0, 1.0, 0.0, 2), PlaneState(1.0, 1.0)), (1.0, -3.0))

    def test_divergence_is_minus_alpha(self) -> None:
        for alpha, expected in ((0.0, 0.0), (0.5, -0.5), (-2.0, 2.0)):
            self.assertEqual(divergence(Parameters(alpha, 1.0, 1.0, 3)), expected)

    def test_exact_jacobian_matches_central_differences(self) -> None:
        for m in (1, 2, 3, 4):
            p = Parameters(alpha=0.7, epsilon=-1.3, sigma=0.4, m=m)
            s = PlaneState(0.8, -0.3)
            with self.subTest(m=m):
                np.testing.assert_allclose(jacobian(p, s.x), numeric_jacobian(p, s), atol=1e-7)


class EnergyTests(unittest.TestCase):
    def test_potential_energy_examples(self) -> None:
        self.assertEqual(potential_energy(Parameters(0.0, 1.0, 1.0, 3), 0.0), 0.0)
        self.assertAlmostEqual(potential_energy(Parameters(0.0, -1.0, 1.0, 3), 1.0), 0.25, places=15)
        self.assertAlmostEqual(potential_energy(Parameters(0.0, 1.0, -1.0, 2), 1.0), -1.0 / 6.0, places=15)

    def test_total_energy_examples(self) -> None:
        p = Parameters(0.0, 1.0, 1.0, 3)
        self.assertEqual(total_energy(p, PlaneState(0.0, 0.0)), 0.0)
        self.assertAlmostEqual(total_energy(p, PlaneState(1.0, 0.0)), 0.75, places=15)
        self.assertAlmostEqual(total_energy(p, PlaneState(0.0, 2.0)), 2.0, places=15)

    def test_dissipation_rate_examples(self) -> None:
        self.assertEqual(dissipation_rate(Parameters(0.0, 1.0, 1.0, 3), PlaneState(3.0, 4.0)), 0.0)
        self.assertEqual(dissipation_rate(Parameters(1.0, 1.0, 1.0, 3), PlaneState(5.0, 2.0)), -4.0)
        self.assertEqual(dissipation_rate(Parameters(-1.0, 1.0, 1.0, 3), PlaneState(0.0, 3.0)), 9.0)

    def test_dissipation_rate_matches_energy_gradient_along_field(self) -> None:
        p = Parameters(alpha=0.6, epsilon=-0.8, sigma=1.2, m=3)
        s = PlaneState(0.9, -1.4)
        fx, fy = eval_field(p, s)
        h = 1e-6
        plus = total_energy(p, PlaneState(s.x + h * fx, s.y + h * fy))
        minus = total_energy(p, PlaneState(s.x - h * fx, s.y - h * fy))
        self.assertAlmostEqual((plus - minus) / (2 * h), dissipation_rate(p, s), places=6)


class RandomStateTests(unittest.TestCase):
    """Field identities on seeded random parameters and states."""

    def setUp(self) -> None:
        self.rng = np.random.default_rng(11)

    def _parameters(self, alpha: Optional[float] = None) -> Parameters:
        signs = self.rng.choice([-1.0, 1.0], size=3)
        return Parameters(
            alpha=float(signs[0] * self.rng.uniform(0.1, 2.0)) if alpha is None else alpha,
            epsilon=float(signs[1] * self.rng.uniform(0.1, 2.0)),
            sigma=float(signs[2] * self.rng.uniform(0.1, 2.0)),
            m=int(self.rng.integers(1, 6)),
        )

    def _state(self) -> PlaneState:
        y = float(self.rng.choice([-1.0, 1.0]) * self.rng.uniform(0.1, 2.0))
        return PlaneState(float(self.rng.uniform(-2.0, 2.0)), y)

    def test_energy_derivative_along_field_is_dissipation_rate(self) -> None:
        for _ in range(200):
            p, s = self._parameters(), self._state()
            fx, fy = eval_field(p, s)
            along = potential_derivative(p, s.x) * fx + s.y * fy
            exact = dissipation_rate(p, s)
            self.assertLessEqual(abs(along - exact), 1e-9 * abs(exact), (p, s))

    def test_exact_jacobian_matches_central_differences(self) -> None:
        for _ in range(200):
            p, s = self._parameters(), self._state()
            np.testing.assert_allclose(jacobian(p, s.x), numeric_jacobian(p, s), rtol=1e-6, atol=1e-6)

    def test_divergence_is_the_jacobian_trace(self) -> None:
        for _ in range(50):
            p, s = self._parameters(), self._state()
            self.assertAlmostEqual(float(np.trace(jacobian(p, s.x))), divergence(p), places=15)

    def test_x_axis_reversibility_of_the_field(self) -> None:
        for _ in range(200):
            p, s = self._parameters(alpha=0.0), self._state()
            f1, f2 = eval_field(p, s)
            self.assertEqual(eval_field(p, PlaneState(s.x, -s.y)), (-f1, f2))

    def test_y_axis_reversibility_of_the_field_for_odd_degree(self) -> None:
        for _ in range(200):
            p, s = self._parameters(alpha=0.0), self._state()
            if p.m % 2 == 0:
                continue
            f1, f2 = eval_field(p, s)
            g1, g2 = eval_field(p, PlaneState(-s.x, s.y))
            self.assertEqual(g1, f1)
            self.assertAlmostEqual(g2, -f2, delta=1e-12 * max(1.0, abs(f2)))

    def test_damping_flips_under_time_reversal(self) -> None:
        for _ in range(100):
            p, s = self._parameters(), self._state()
            q = Parameters(alpha=-p.alpha, epsilon=p.epsilon, sigma=p.sigma, m=p.m)
            f1, f2 = eval_field(p, s)
            g1, g2 = eval_field(q, PlaneState(s.x, -s.y))
            self.assertEqual(g1, -f1)
            self.assertAlmostEqual(g2, f2, delta=1e-12 * max(1.0, abs(f2)))



class CanonicalFormTests(unittest.TestCase):
    def test_first_integral_examples(self) -> None:
        self.assertEqual(canonical_first_integral(Parameters(0.0, 1.0, 1.0, 3), 0.0, 0.0), 0.0)
        self.assertAlmostEqual(canonical_first_integral(Parameters(0.0, 1.0, 1.0, 3), 1.0, 0.0), 1.5, places=15)
        self.assertAlmostEqual(canonical_first_integral(Parameters(0.0, 2.0, 1.0, 3), 1.0, 1.0), 3.0, places=15)

    def test_first_integral_is_conserved_by_rescaled_field(self) -> None:
        p = Parameters(alpha=0.0, epsilon=-0.7, sigma=2.0, m=4)
        for u, v in ((0.3, 0.1), (-0.9, 1.2), (1.1, -0.4)):
            du, dv = canonical_rescaled_field(p, u, v)
            grad_u = 2.0 * u + 2.0 * p.epsilon / p.sigma * int_power(u, p.m)
            grad_v = 2.0 * v
            self.assertAlmostEqual(grad_u * du + grad_v * dv, 0.0, places=12)

    def test_canonical_coordinates_scale_velocity(self) -> None:
        u, v = to_canonical(Parameters(0.0, 1.0, 4.0, 3), PlaneState(1.5, 2.0))
        self.assertEqual((u, v), (1.5, 1.0))

    def test_canonical_form_requires_positive_sigma(self) -> None:
        p = Parameters(alpha=0.0, epsilon=1.0, sigma=-1.0, m=3)
        with self.assertRaises(InvalidParameters):
            canonical_first_integral(p, 1.0, 0.0)
        with self.assertRaises(InvalidParameters):
            to_canonical(p, PlaneState(1.0, 0.0))


class PotentialCriticalPointTests(unittest.TestCase):
    def test_odd_degree_with_opposite_signs_has_two_maxima(self) -> None:
        points = potential_critical_points(Parameters(0.0, -1.0, 1.0, 3))
        self.assertEqual([tag for _, tag in points], ["max", "min", "max"])
        self.assertAlmostEqual(points[0][0], -1.0, places=12)
        self.assertAlmostEqual(points[2][0], 1.0, places=12)

    def test_even_degree_has_one_outer_point(self) -> None:
        points = potential_critical_points(Parameters(0.0, 1.0, -1.0, 2))
        self.assertEqual(points, [(0.0, "max"), (1.0, "min")])


class DegeneracyFlagTests(unittest.TestCase):
    def test_zero_linear_stiffness_for_m1_is_degenerate(self) -> None:
        flags = degeneracy_flags(Parameters(alpha=1.0, epsilon=1.0, sigma=-1.0, m=1))
        self.assertTrue(flags.stiffness_zero)
        self.assertTrue(flags.degenerate)

    def test_zero_sigma_for_higher_degree_is_degenerate(self) -> None:
        flags = degeneracy_flags(Parameters(alpha=1.0, epsilon=1.0, sigma=0.0, m=3))
        self.assertTrue(flags.sigma_zero)
        self.assertTrue(flags.on_table_boundary)
        self.assertTrue(flags.to_dict()["degenerate"])

    def test_node_focus_boundary_sets_discriminant_flag(self) -> None:
        self.assertTrue(degeneracy_flags(Parameters(alpha=2.0, epsilon=1.0, sigma=1.0, m=3)).discriminant_zero)
        # Outer equilibrium of an even degree: alpha^2 + 4 sigma (m - 1) = 0.
        self.assertTrue(degeneracy_flags(Parameters(alpha=2.0, epsilon=1.0, sigma=-1.0, m=2)).discriminant_zero)
        self.assertTrue(degeneracy_flags(Parameters(alpha=2.0, epsilon=0.5, sigma=0.5, m=1)).discriminant_zero)

    def test_discriminant_boundary_alone_is_not_degenerate(self) -> None:
        for p in (
            Parameters(alpha=2.0, epsilon=1.0, sigma=1.0, m=3),
            Parameters(alpha=2.0, epsilon=0.5, sigma=0.5, m=1),
        ):
            with self.subTest(p=p):
                flags = degeneracy_flags(p)
                self.assertTrue(flags.discriminant_zero)
                self.assertFalse(flags.degenerate)

    def test_generic_point_is_not_flagged(self) -> None:
        flags = degeneracy_flags(Parameters(alpha=1.0, epsilon=1.0, sigma=1.0, m=3))
        self.assertFalse(flags.degenerate)
        self.assertFalse(flags.discriminant_zero)
        self.assertFalse(flags.on_table_boundary)


if __name__ == "__main__":
    unittest.main()
