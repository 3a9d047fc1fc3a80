"""
ROLE: First-return map on the section {y = 0, x > 0}.

The orbit from (r, 0) is integrated until the next crossing of the x-axis
in the same direction as it left, at x > 0, after winding once around the
origin. The outcome compares the return radius P(r) with r; the decision
never consults the closed-form eigenvalues.

CONFIG KEYS:
  - oracle.close_tol: relative closure tolerance (DEFAULT_CLOSE_TOL when not passed)
  - oracle.max_return_time: time budget per return (DEFAULT_MAX_RETURN_TIME when not passed)
  - read by oracle.centers.oracle_settings; this module takes them as arguments

FAILURE MODES:
  - r <= 0 -> InvalidParameters
  - (r, 0) is an equilibrium -> EquilibriumStart
  - solver failure -> IntegrationFailure (propagated)

TESTS:
  - tests/test_oracle.py
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np

from duffing_atlas.core.errors import EquilibriumStart, InvalidParameters
from duffing_atlas.dynamics.integrator import ESCAPED, IntegrationOptions, Trajectory, integrate
from duffing_atlas.model.field import field_xy, total_energy
from duffing_atlas.model.parameters import Parameters, PlaneState


CLOSED = "Closed"
SPIRAL_IN = "SpiralIn"
SPIRAL_OUT = "SpiralOut"
ESCAPE = "Escape"
NO_RETURN = "NoReturn"

DEFAULT_CLOSE_TOL = 1e-6
DEFAULT_MAX_RETURN_TIME = 1e3


@dataclass(frozen=True)
class ReturnMapResult:
    outcome: str
    section_point: PlaneState
    radius: float
    next_radius: Optional[float] = None
    period: Optional[float] = None
    half_time: Optional[float] = None
    winding: int = 0
    escape_time: Optional[float] = None

    @property
    def closed(self) -> bool:
        return self.outcome == CLOSED

    def relative_gap(self) -> Optional[float]:
        if self.next_radius is None:
            return None
        return abs(self.next_radius - self.radius) / max(1.0, self.radius)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "outcome": self.outcome,
            "radius": self.radius,
            "next_radius": self.next_radius,
            "period": self.period,
            "half_time": self.half_time,
            "winding": self.winding,
            "escape_time": self.escape_time,
            "section_point": [self.section_point.x, self.section_point.y],
        }


def close_tolerance(r: float, close_tol: float = DEFAULT_CLOSE_TOL) -> float:
    return close_tol * max(1.0, r)


def _escape_radius(p: Parameters, r: float) -> float:
    h0 = total_energy(p, PlaneState(r, 0.0))
    return max(1e6, 100.0 * max(r, math.sqrt(2.0 * abs(h0))))


def _winding(traj: Trajectory) -> int:
    angles = np.unwrap(np.arctan2(traj.states[:, 1], traj.states[:, 0]))
    return int(round((angles[-1] - angles[0]) / (2.0 * math.pi)))


def poincare_return(
    p: Parameters,
    r: float,
    close_tol: float = DEFAULT_CLOSE_TOL,
    max_time: float = DEFAULT_MAX_RETURN_TIME,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-12,
) -> ReturnMapResult:
    if not r > 0.0:
        raise InvalidParameters(f"return map radius must be > 0, got {r}")
    start = PlaneState(r, 0.0)
    ydot = field_xy(p, r, 0.0)[1]
    if abs(ydot) <= 1e-14 * max(1.0, r):
        raise EquilibriumStart(f"({r}, 0) is an equilibrium for {p}")
    direction = 1 if ydot > 0 else -1

    opts = IntegrationOptions(
        rel_tol=rel_tol,
        abs_tol=abs_tol,
        max_step=0.5,
        escape_radius=_escape_radius(p, r),
        max_time=max_time,
        section_events=2,
    )
    traj = integrate(p, start, opts)
    if traj.termination.kind == ESCAPED:
        return ReturnMapResult(ESCAPE, start, r, escape_time=traj.termination.time)

    half_time = None
    for crossing in traj.crossings:
        if crossing.direction != direction and crossing.state.x < 0:
            half_time = crossing.t
            break
    returned = [c for c in traj.crossings if c.direction == direction and c.state.x > 0]
    if not returned:
        return ReturnMapResult(NO_RETURN, start, r, half_time=half_time)
    winding = _winding(traj)
    if abs(winding) != 1:
        return ReturnMapResult(NO_RETURN, start, r, half_time=half_time, winding=winding)

    back = returned[0]
    next_radius = back.state.x
    gap = next_radius - r
    if abs(gap) <= close_tolerance(r, close_tol):
        outcome = CLOSED
    elif gap < 0:
        outcome = SPIRAL_IN
    else:
        outcome = SPIRAL_OUT
    return ReturnMapResult(
        outcome,
        start,
        r,
        next_radius=next_radius,
        period=back.t,
        half_time=half_time,
        winding=winding,
    )


def return_sequence(
    p: Parameters,
    r: float,
    count: int,
    close_tol: float = DEFAULT_CLOSE_TOL,
    max_time: float = DEFAULT_MAX_RETURN_TIME,
) -> List[ReturnMapResult]:
    """Iterate the return map from r; stops early on a non-spiral outcome."""
    results: List[ReturnMapResult] = []
    radius = r
    for _ in range(count):
        result = poincare_return(p, radius, close_tol=close_tol, max_time=max_time)
        results.append(result)
        if result.outcome not in (SPIRAL_IN, SPIRAL_OUT) or result.next_radius is None:
            break
        radius = result.next_radius
        if radius <= close_tolerance(radius, close_tol):
            break
    return results
