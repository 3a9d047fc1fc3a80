import io
import math
import pickle
import unittest
from unittest.mock import patch

import numpy as np

from duffing_atlas.core.errors import IntegrationFailure, InvalidParameters
from duffing_atlas.core.logging import LogEmitter
from duffing_atlas.dynamics.integrator import (
    ESCAPED,
    FAILED,
    SECTION_EVENT,
    SYMPLECTIC_LEAPFROG,
    TIME_EXHAUSTED,
    IntegrationOptions,
    energy_drift,
    energy_series,
    integrate,
)
from duffing_atlas.model.parameters import Parameters, PlaneState


HARMONIC = Parameters(alpha=0.0, epsilon=0.5, sigma=0.5, m=1)
CUBIC = Parameters(alpha=0.0, epsilon=1.0, sigma=1.0, m=3)


class _FailingSolver:
    """Stands in for RK45: one good step, then a failed one."""

    def __init__(self, fun, t0, y0, t_bound, **_kwargs) -> None:
        self.t = t0
        self.y = np.array(y0, dtype=float)
        self.status = "running"
        self._calls = 0

    def step(self):
        self._calls += 1
        if self._calls == 1:
            self.t += 0.1
            self.y = self.y + 0.01
            return None
        self.status = "failed"
        return "Required step size is less than spacing between numbers."


class IntegrateTests(unittest.TestCase):
    def test_harmonic_period_returns_to_start(self) -> None:
        opts = IntegrationOptions(max_time=2.0 * math.pi)
        traj = integrate(HARMONIC, PlaneState(1.0, 0.0), opts)
        self.assertEqual(traj.termination.kind, TIME_EXHAUSTED)
        self.assertAlmostEqual(traj.termination.time, 2.0 * math.pi, places=12)
        self.assertAlmostEqual(traj.final_state.x, 1.0, places=7)
        self.assertAlmostEqual(traj.final_state.y, 0.0, places=7)

    def test_section_events_stop_the_run(self) -> None:
        opts = IntegrationOptions(max_time=100.0, section_events=2)
        traj = integrate(HARMONIC, PlaneState(1.0, 0.0), opts)
        self.assertEqual(traj.termination.kind, SECTION_EVENT)
        self.assertEqual(traj.termination.count, 2)
        first, second = traj.crossings
        self.assertAlmostEqual(first.t, math.pi, places=8)
        self.assertAlmostEqual(first.state.x, -1.0, places=8)
        self.assertEqual(first.direction, 1)
        self.assertAlmostEqual(second.t, 2.0 * math.pi, places=8)
        self.assertEqual(second.direction, -1)
        self.assertEqual(traj.section_times, [first.t, second.t])
        self.assertEqual(traj.times[-1], second.t)

    def test_backward_integration_runs_in_negative_time(self) -> None:
        traj = integrate(HARMONIC, PlaneState(1.0, 0.0), IntegrationOptions(max_time=math.pi, backward=True))
        self.assertTrue(np.all(np.diff(traj.times) < 0))
        self.assertAlmostEqual(traj.termination.time, -math.pi, places=12)
        self.assertAlmostEqual(traj.final_state.x, -1.0, places=7)

    def test_conservative_cubic_conserves_energy(self) -> None:
        opts = IntegrationOptions(max_time=100.0, rel_tol=1e-10, abs_tol=1e-12)
        traj = integrate(CUBIC, PlaneState(1.0, 0.0), opts)
        self.assertEqual(traj.termination.kind, TIME_EXHAUSTED)
        self.assertLess(energy_drift(CUBIC, traj), 1e-8)
        series = energy_series(CUBIC, traj)
        self.assertAlmostEqual(float(series[0]), 0.75, places=15)

    def test_even_degree_orbit_escapes(self) -> None:
        p = Parameters(alpha=0.0, epsilon=1.0, sigma=1.0, m=2)
        traj = integrate(p, PlaneState(-10.0, 0.0), IntegrationOptions(escape_radius=1e6, max_time=1e3))
        self.assertEqual(traj.termination.kind, ESCAPED)
        self.assertLess(traj.termination.time, 1e3)
        self.assertAlmostEqual(traj.final_state.norm() / 1e6, 1.0, places=5)

    def test_equilibrium_start_stays_put(self) -> None:
        p = Parameters(alpha=0.3, epsilon=-1.0, sigma=1.0, m=3)
        traj = integrate(p, PlaneState(1.0, 0.0), IntegrationOptions(max_time=20.0))
        self.assertTrue(np.all(np.abs(traj.states - np.array([1.0, 0.0])) < 1e-9))
        self.assertEqual(traj.crossings, [])

    def test_zero_horizon_returns_the_start(self) -> None:
        traj = integrate(CUBIC, PlaneState(0.5, 0.5), IntegrationOptions(max_time=0.0))
        self.assertEqual(len(traj), 1)
        self.assertEqual(energy_drift(CUBIC, traj), 0.0)

    def test_origin_has_zero_drift(self) -> None:
        traj = integrate(CUBIC, PlaneState(0.0, 0.0), IntegrationOptions(max_time=10.0))
        self.assertLessEqual(energy_drift(CUBIC, traj), 1e-12)

    def test_halving_tolerances_reduces_energy_drift(self) -> None:
        drifts = []
        for k in range(4):
            tol = 1e-6 / 2**k
            opts = IntegrationOptions(max_time=100.0, rel_tol=tol, abs_tol=tol * 1e-2)
            drifts.append(energy_drift(CUBIC, integrate(CUBIC, PlaneState(1.0, 0.0), opts)))
        for coarse, fine in zip(drifts, drifts[1:]):
            self.assertLess(fine, coarse)


class ReversibilityTests(unittest.TestCase):
    def _final(self, p: Parameters, s0: PlaneState, t: float, backward: bool = False) -> PlaneState:
        opts = IntegrationOptions(rel_tol=1e-11, abs_tol=1e-13, max_time=t, backward=backward)
        traj = integrate(p, s0, opts)
        self.assertEqual(traj.termination.kind, TIME_EXHAUSTED)
        return traj.final_state

    def test_x_axis_reflection_reverses_time(self) -> None:
        for p in (CUBIC, Parameters(alpha=0.0, epsilon=-1.0, sigma=1.0, m=2), Parameters(0.0, 0.7, 1.3, 4)):
            for t in (1.0, 5.0, 20.0):
                with self.subTest(p=p, t=t):
                    forward = self._final(p, PlaneState(0.4, 0.3), t)
                    mirrored = self._final(p, PlaneState(0.4, -0.3), t, backward=True)
                    self.assertAlmostEqual(forward.x, mirrored.x, delta=1e-6)
                    self.assertAlmostEqual(forward.y, -mirrored.y, delta=1e-6)

    def test_y_axis_reflection_reverses_time_for_odd_degree(self) -> None:
        for p in (CUBIC, Parameters(alpha=0.0, epsilon=-1.0, sigma=1.0, m=3), Parameters(0.0, 2.0, 0.5, 5)):
            for t in (1.0, 5.0, 20.0):
                with self.subTest(p=p, t=t):
                    forward = self._final(p, PlaneState(0.4, 0.3), t)
                    mirrored = self._final(p, PlaneState(-0.4, 0.3), t, backward=True)
                    self.assertAlmostEqual(forward.x, -mirrored.x, delta=1e-6)
                    self.assertAlmostEqual(forward.y, mirrored.y, delta=1e-6)


class LeapfrogTests(unittest.TestCase):
    def test_leapfrog_requires_zero_damping(self) -> None:
        p = Parameters(alpha=0.1, epsilon=1.0, sigma=1.0, m=3)
        with self.assertRaises(InvalidParameters):
            integrate(p, PlaneState(1.0, 0.0), IntegrationOptions(method=SYMPLECTIC_LEAPFROG, max_time=1.0))

    def test_leapfrog_energy_error_stays_bounded(self) -> None:
        opts = IntegrationOptions(method=SYMPLECTIC_LEAPFROG, max_step=0.005, max_time=50.0)
        traj = integrate(CUBIC, PlaneState(1.0, 0.0), opts)
        self.assertEqual(traj.termination.kind, TIME_EXHAUSTED)
        self.assertAlmostEqual(traj.termination.time, 50.0, places=12)
        self.assertLess(energy_drift(CUBIC, traj), 1e-3)

    def test_leapfrog_locates_section_crossings(self) -> None:
        opts = IntegrationOptions(method=SYMPLECTIC_LEAPFROG, max_step=0.001, max_time=100.0, section_events=2)
        traj = integrate(HARMONIC, PlaneState(1.0, 0.0), opts)
        self.assertEqual(traj.termination.kind, SECTION_EVENT)
        self.assertAlmostEqual(traj.crossings[0].t, math.pi, places=4)


class OptionTests(unittest.TestCase):
    def test_from_config_maps_method_names(self) -> None:
        config = {"integration": {"method": "symplectic_leapfrog", "rel_tol": 1e-8}}
        opts = IntegrationOptions.from_config(config, max_time=3.0)
        self.assertEqual(opts.method, SYMPLECTIC_LEAPFROG)
        self.assertEqual(opts.rel_tol, 1e-8)
        self.assertEqual(opts.max_time, 3.0)

    def test_invalid_options_are_rejected(self) -> None:
        for bad in (
            IntegrationOptions(method="Euler"),
            IntegrationOptions(rel_tol=0.0),
            IntegrationOptions(max_step=-1.0),
            IntegrationOptions(max_time=-1.0),
            IntegrationOptions(section_events=-1),
        ):
            with self.subTest(opts=bad):
                with self.assertRaises(InvalidParameters):
                    integrate(CUBIC, PlaneState(1.0, 0.0), bad)

    def test_energy_drift_requires_conservative_system(self) -> None:
        p = Parameters(alpha=0.5, epsilon=1.0, sigma=1.0, m=3)
        traj = integrate(p, PlaneState(1.0, 0.0), IntegrationOptions(max_time=1.0))
        with self.assertRaises(InvalidParameters):
            energy_drift(p, traj)


class FailureTests(unittest.TestCase):
    def test_solver_failure_carries_partial_trajectory(self) -> None:
        logger = LogEmitter(min_level="error", stream=io.StringIO())
        with patch("duffing_atlas.dynamics.integrator.RK45", _FailingSolver):
            with self.assertRaises(IntegrationFailure) as ctx:
                integrate(CUBIC, PlaneState(1.0, 0.0), IntegrationOptions(max_time=10.0), logger=logger)
        exc = ctx.exception
        self.assertAlmostEqual(exc.last_time, 0.1, places=12)
        self.assertIsNotNone(exc.partial)
        self.assertEqual(exc.partial.termination.kind, FAILED)
        self.assertEqual(len(exc.partial), 2)
        self.assertEqual(len(logger.events("integration_failed")), 1)

    def test_failure_survives_pickling(self) -> None:
        exc = IntegrationFailure("step size underflow", last_time=2.5, last_state=(1.0, -1.0))
        copy = pickle.loads(pickle.dumps(exc))
        self.assertEqual(copy.last_time, 2.5)
        self.assertEqual(copy.last_state, (1.0, -1.0))
        self.assertEqual(str(copy), "step size underflow")


if __name__ == "__main__":
    unittest.main()
