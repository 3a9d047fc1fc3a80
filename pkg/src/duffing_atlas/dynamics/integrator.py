"""
ROLE: Numerical integration of the oscillator in the plane with escape and
x-axis section events, plus energy-drift accounting.

INPUTS:
  - Parameters, start PlaneState, IntegrationOptions
OUTPUTS:
  - Trajectory (samples, termination, section crossings)

CONFIG KEYS:
  - integration.method: adaptive_rk | symplectic_leapfrog
  - integration.rel_tol / integration.abs_tol: embedded-pair error tolerances
  - integration.max_step: step cap (fixed step for leapfrog)
  - integration.escape_radius / integration.max_time

PERF / TIMING:
  - one scipy RK45 step per sample; events refined only on steps that bracket them

FAILURE MODES:
  - invalid options -> InvalidParameters
  - step-size underflow / solver failure -> IntegrationFailure with last valid state and the
    samples so far in `partial` -> log integration_failed

LOG EVENTS:
  - module=dynamics.integrator, event=integration_failed, payload keys=t, state, message

TESTS:
  - tests/test_integrator.py
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.integrate import RK45
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import bisect

from duffing_atlas.core.config import get_path
from duffing_atlas.core.errors import IntegrationFailure, InvalidParameters
from duffing_atlas.model.field import field_xy, int_power, total_energy
from duffing_atlas.model.parameters import Parameters, PlaneState


ADAPTIVE_RK = "AdaptiveRK"
SYMPLECTIC_LEAPFROG = "SymplecticLeapfrog"
_CONFIG_METHODS = {"adaptive_rk": ADAPTIVE_RK, "symplectic_leapfrog": SYMPLECTIC_LEAPFROG}

TIME_EXHAUSTED = "TimeExhausted"
ESCAPED = "Escaped"
SECTION_EVENT = "SectionEvent"
FAILED = "Failed"

EVENT_XTOL = 1e-12


@dataclass(frozen=True)
class IntegrationOptions:
    method: str = ADAPTIVE_RK
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = 0.5
    escape_radius: float = 1e6
    max_time: float = 1e4
    backward: bool = False
    section_events: int = 0

    @classmethod
    def from_config(cls, config: Dict[str, Any], **overrides: Any) -> "IntegrationOptions":
        method = str(get_path(config, "integration.method", "adaptive_rk"))
        opts = cls(
            method=_CONFIG_METHODS.get(method, method),
            rel_tol=float(get_path(config, "integration.rel_tol", 1e-10)),
            abs_tol=float(get_path(config, "integration.abs_tol", 1e-12)),
            max_step=float(get_path(config, "integration.max_step", 0.5)),
            escape_radius=float(get_path(config, "integration.escape_radius", 1e6)),
            max_time=float(get_path(config, "integration.max_time", 1e4)),
        )
        return replace(opts, **overrides) if overrides else opts

    def validate(self, p: Optional[Parameters] = None) -> None:
        if self.method not in (ADAPTIVE_RK, SYMPLECTIC_LEAPFROG):
            raise InvalidParameters(f"unknown integration method: {self.method}")
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise InvalidParameters("tolerances must be > 0")
        if self.max_step <= 0:
            raise InvalidParameters("max_step must be > 0")
        if self.escape_radius <= 0:
            raise InvalidParameters("escape_radius must be > 0")
        if self.max_time < 0:
            raise InvalidParameters("max_time must be >= 0")
        if self.section_events < 0:
            raise InvalidParameters("section_events must be >= 0")
        if self.method == SYMPLECTIC_LEAPFROG and p is not None and p.alpha != 0.0:
            raise InvalidParameters("SymplecticLeapfrog requires alpha = 0")

    @property
    def direction(self) -> float:
        return -1.0 if self.backward else 1.0


@dataclass(frozen=True)
class Termination:
    kind: str
    time: Optional[float] = None
    count: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "time": self.time, "count": self.count}


@dataclass(frozen=True)
class SectionCrossing:
    """Crossing of the x-axis; direction +1 when y goes from negative to positive."""

    t: float
    state: PlaneState
    direction: int


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    termination: Termination
    crossings: List[SectionCrossing] = field(default_factory=list)

    @property
    def samples(self) -> List[Tuple[float, PlaneState]]:
        return [(float(t), PlaneState(float(z[0]), float(z[1]))) for t, z in zip(self.times, self.states)]

    @property
    def section_times(self) -> List[float]:
        return [c.t for c in self.crossings]

    @property
    def section_states(self) -> List[PlaneState]:
        return [c.state for c in self.crossings]

    @property
    def final_state(self) -> PlaneState:
        z = self.states[-1]
        return PlaneState(float(z[0]), float(z[1]))

    def __len__(self) -> int:
        return int(self.times.shape[0])


StepFn = Callable[[float, np.ndarray], np.ndarray]


class Stepper:
    """Uniform step interface over RK45 and leapfrog, with interpolation on the last step."""

    def __init__(
        self,
        fun: StepFn,
        t0: float,
        z0: np.ndarray,
        t_bound: float,
        opts: IntegrationOptions,
        leapfrog: Optional[Parameters] = None,
    ) -> None:
        self._fun = fun
        self._t_bound = t_bound
        self._leapfrog = leapfrog
        self.t = t0
        self.z = np.array(z0, dtype=float)
        self.t_prev = t0
        self.z_prev = self.z.copy()
        self._interp: Optional[Callable[[float], np.ndarray]] = None
        self._solver: Optional[RK45] = None
        if leapfrog is None:
            self._solver = RK45(fun, t0, self.z, t_bound, max_step=opts.max_step, rtol=opts.rel_tol, atol=opts.abs_tol)
        else:
            self._h = math.copysign(opts.max_step, t_bound - t0)

    @property
    def finished(self) -> bool:
        if self._solver is not None:
            return self._solver.status != "running"
        return self.t == self._t_bound

    def advance(self) -> None:
        self.t_prev, self.z_prev = self.t, self.z.copy()
        self._interp = None
        if self._solver is not None:
            message = self._solver.step()
            if self._solver.status == "failed":
                raise IntegrationFailure(
                    f"integration failed at t={self.t_prev}: {message}",
                    last_time=self.t_prev,
                    last_state=(float(self.z_prev[0]), float(self.z_prev[1])),
                )
            self.t = float(self._solver.t)
            self.z = np.array(self._solver.y, dtype=float)
            return
        h = self._h
        if abs(self._t_bound - self.t) <= abs(h):
            h = self._t_bound - self.t
            self.t = self._t_bound
        else:
            self.t = self.t + h
        self.z = _leapfrog_step(self._leapfrog, self.z, h)

    def interpolate(self, t: float) -> np.ndarray:
        if self._interp is None:
            self._interp = self._build_interpolant()
        return np.asarray(self._interp(t), dtype=float)

    def _build_interpolant(self) -> Callable[[float], np.ndarray]:
        if self._solver is not None:
            return self._solver.dense_output()
        ends = [(self.t_prev, self.z_prev), (self.t, self.z)]
        ends.sort(key=lambda item: item[0])
        return CubicHermiteSpline(
            [ends[0][0], ends[1][0]],
            np.array([ends[0][1], ends[1][1]]),
            np.array([self._fun(t, z) for t, z in ends]),
        )

    def locate(self, g: Callable[[np.ndarray], float], end: Optional[float] = None) -> float:
        """Time between t_prev and `end` (default t) where g changes sign, to EVENT_XTOL."""
        hi = self.t if end is None else end
        return float(bisect(lambda t: g(self.interpolate(t)), self.t_prev, hi, xtol=EVENT_XTOL, maxiter=200))


def _leapfrog_step(p: Parameters, z: np.ndarray, h: float) -> np.ndarray:
    """Kick-drift-kick for the conservative field."""
    x, y = float(z[0]), float(z[1])
    y += 0.5 * h * (-p.epsilon * int_power(x, p.m) - p.sigma * x)
    x += h * y
    y += 0.5 * h * (-p.epsilon * int_power(x, p.m) - p.sigma * x)
    return np.array([x, y])


def plane_fun(p: Parameters) -> StepFn:
    def fun(_t: float, z: np.ndarray) -> np.ndarray:
        return np.array(field_xy(p, float(z[0]), float(z[1])))

    return fun


def integrate(p: Parameters, s0: PlaneState, opts: IntegrationOptions, logger: Optional[Any] = None) -> Trajectory:
    """Integrate from s0 until escape, max_time or the requested section-event count."""
    opts.validate(p)
    fun = plane_fun(p)
    t_bound = opts.direction * opts.max_time
    z0 = np.array([s0.x, s0.y], dtype=float)
    times: List[float] = [0.0]
    states: List[np.ndarray] = [z0.copy()]
    crossings: List[SectionCrossing] = []
    if opts.max_time == 0.0:
        return Trajectory(np.asarray(times), np.asarray(states), Termination(TIME_EXHAUSTED, 0.0))

    stepper = Stepper(fun, 0.0, z0, t_bound, opts, leapfrog=p if opts.method == SYMPLECTIC_LEAPFROG else None)
    radius = opts.escape_radius
    try:
        while not stepper.finished:
            stepper.advance()
            z_prev, z = stepper.z_prev, stepper.z
            if not np.all(np.isfinite(z)) or math.hypot(z[0], z[1]) > radius:
                if not np.all(np.isfinite(z)):
                    raise IntegrationFailure(
                        f"non-finite state at t={stepper.t}",
                        last_time=stepper.t_prev,
                        last_state=(float(z_prev[0]), float(z_prev[1])),
                    )
                t_esc = stepper.locate(lambda q: math.hypot(q[0], q[1]) - radius)
                _append_crossings(stepper, crossings, upto=t_esc)
                times.append(t_esc)
                states.append(stepper.interpolate(t_esc))
                return Trajectory(np.asarray(times), np.asarray(states), Termination(ESCAPED, t_esc), crossings)
            if _append_crossings(stepper, crossings, limit=opts.section_events):
                last = crossings[-1]
                times.append(last.t)
                states.append(np.array([last.state.x, last.state.y]))
                return Trajectory(
                    np.asarray(times), np.asarray(states), Termination(SECTION_EVENT, last.t, len(crossings)), crossings
                )
            times.append(stepper.t)
            states.append(z.copy())
    except IntegrationFailure as exc:
        exc.partial = Trajectory(np.asarray(times), np.asarray(states), Termination(FAILED, exc.last_time), crossings)
        if logger is not None:
            logger.emit(
                "error",
                "dynamics.integrator",
                "integration_failed",
                {"t": exc.last_time, "state": exc.last_state, "message": str(exc)},
            )
        raise
    return Trajectory(np.asarray(times), np.asarray(states), Termination(TIME_EXHAUSTED, stepper.t), crossings)


def _append_crossings(
    stepper: Stepper,
    crossings: List[SectionCrossing],
    limit: int = 0,
    upto: Optional[float] = None,
) -> bool:
    """Record an x-axis crossing inside the last step; True once `limit` is reached.

    A start on the axis is not a crossing; a step landing exactly on it is.
    """
    t_end = stepper.t if upto is None else upto
    end_state = stepper.z if upto is None else stepper.interpolate(upto)
    y0 = float(stepper.z_prev[1])
    y1 = float(end_state[1])
    if y1 == 0.0 and y0 != 0.0:
        t_cross, x_cross = t_end, float(end_state[0])
    elif y0 * y1 < 0.0:
        t_cross = stepper.locate(lambda q: q[1], end=t_end)
        x_cross = float(stepper.interpolate(t_cross)[0])
    else:
        return False
    forward = stepper.t > stepper.t_prev
    y_early, y_late = (y0, y1) if forward else (y1, y0)
    crossings.append(SectionCrossing(t_cross, PlaneState(x_cross, 0.0), 1 if y_late > y_early else -1))
    return bool(limit) and len(crossings) >= limit


def energy_drift(p: Parameters, traj: Trajectory) -> float:
    """max |H(sample) - H(s0)| over a conservative trajectory."""
    if p.alpha != 0.0:
        raise InvalidParameters("energy drift is defined for alpha = 0")
    if len(traj) == 0:
        return 0.0
    h0 = total_energy(p, PlaneState(float(traj.states[0][0]), float(traj.states[0][1])))
    drift = 0.0
    for z in traj.states:
        drift = max(drift, abs(total_energy(p, PlaneState(float(z[0]), float(z[1]))) - h0))
    return drift


def energy_series(p: Parameters, traj: Trajectory) -> np.ndarray:
    return np.array([total_energy(p, PlaneState(float(z[0]), float(z[1]))) for z in traj.states])
