"""
ROLE: Integration on the closed Poincare disc by hopping between charts.

The plane chart hands over to U1/V1/U2/V2 once max(|x|, |y|) exceeds
disc.switch_out; a directional chart hands over to the other axis chart
when |u| exceeds switch_out, and back to the plane once the point lies in
the box max(|x|, |y|) < disc.switch_back. Time is the chart time of each
field, so only orientation is shared across charts.

CONFIG KEYS:
  - disc.switch_out / disc.switch_back: hysteresis thresholds

FAILURE MODES:
  - solver failure -> IntegrationFailure

LOG EVENTS:
  - module=dynamics.disc, event=chart_switch, payload keys=t, source, target (debug)

TESTS:
  - tests/test_disc.py
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, List, Optional, Tuple, Union

import numpy as np

from duffing_atlas.analysis.infinity import PLANE, U1, U2, V1, V2, ChartPoint, chart_field, to_homogeneous, transition
from duffing_atlas.dynamics.integrator import TIME_EXHAUSTED, IntegrationOptions, Stepper, Termination
from duffing_atlas.model.parameters import Parameters, PlaneState


@dataclass(frozen=True)
class DiscSample:
    t: float
    chart: str
    u: float
    v: float


@dataclass(frozen=True)
class ChartSwitch:
    t: float
    source: str
    target: str
    before: Tuple[float, float]
    after: Tuple[float, float]


@dataclass
class DiscTrajectory:
    samples: List[DiscSample]
    switch_events: List[ChartSwitch] = field(default_factory=list)
    termination: Termination = field(default_factory=lambda: Termination(TIME_EXHAUSTED))

    def in_chart(self, chart: str) -> List[DiscSample]:
        return [s for s in self.samples if s.chart == chart]

    @property
    def final(self) -> DiscSample:
        return self.samples[-1]


def chart_fun(p: Parameters, chart: str) -> Callable[[float, np.ndarray], np.ndarray]:
    def fun(_t: float, z: np.ndarray) -> np.ndarray:
        return np.array(chart_field(p, chart, float(z[0]), float(z[1])))

    return fun


def _directional_chart(x: float, y: float) -> str:
    if abs(x) >= abs(y):
        return U1 if x > 0 else V1
    return U2 if y > 0 else V2


def _next_chart(chart: str, u: float, v: float, switch_out: float, switch_back: float) -> Optional[str]:
    if chart == PLANE:
        if max(abs(u), abs(v)) > switch_out:
            return _directional_chart(u, v)
        return None
    if max(1.0, abs(u)) < switch_back * abs(v):
        return PLANE
    if abs(u) > switch_out:
        # In U1/V1 the other coordinate is y = u*x; in U2/V2 it is x = u*y.
        lead = 1.0 if chart in (U1, U2) else -1.0
        other = lead * u
        if chart in (U1, V1):
            return U2 if other > 0 else V2
        return U1 if other > 0 else V1
    return None


def integrate_on_disc(
    p: Parameters,
    start: Union[PlaneState, ChartPoint],
    opts: IntegrationOptions,
    switch_out: float = 2.0,
    switch_back: float = 1.5,
    logger: Optional[Any] = None,
) -> DiscTrajectory:
    """Integrate the compactified flow for opts.max_time units of chart time."""
    opts.validate()
    if isinstance(start, ChartPoint):
        chart, z = start.chart, np.array([start.u, start.v], dtype=float)
    else:
        chart, z = PLANE, np.array([start.x, start.y], dtype=float)
        target = _next_chart(PLANE, start.x, start.y, switch_out, switch_back)
        if target is not None:
            chart = target
            z = np.array(transition(PLANE, chart, start.x, start.y), dtype=float)

    t = 0.0
    t_bound = opts.direction * opts.max_time
    samples = [DiscSample(t, chart, float(z[0]), float(z[1]))]
    switches: List[ChartSwitch] = []
    chart_opts = IntegrationOptions(rel_tol=opts.rel_tol, abs_tol=opts.abs_tol, max_step=opts.max_step)
    while t != t_bound:
        stepper = Stepper(chart_fun(p, chart), t, z, t_bound, chart_opts)
        switched = False
        while not stepper.finished:
            stepper.advance()
            t, z = stepper.t, stepper.z
            samples.append(DiscSample(t, chart, float(z[0]), float(z[1])))
            target = _next_chart(chart, float(z[0]), float(z[1]), switch_out, switch_back)
            if target is None:
                continue
            after = transition(chart, target, float(z[0]), float(z[1]))
            switches.append(ChartSwitch(t, chart, target, (float(z[0]), float(z[1])), after))
            if logger is not None:
                logger.emit("debug", "dynamics.disc", "chart_switch", {"t": t, "source": chart, "target": target})
            chart, z = target, np.array(after, dtype=float)
            samples.append(DiscSample(t, chart, float(z[0]), float(z[1])))
            switched = True
            break
        if not switched:
            break
    return DiscTrajectory(samples=samples, switch_events=switches, termination=Termination(TIME_EXHAUSTED, t))


def disc_point(sample: DiscSample) -> Tuple[float, float, float]:
    """Unit-sphere point of a disc sample, comparable across charts."""
    X, Y, Z = to_homogeneous(sample.chart, sample.u, sample.v)
    norm = float(np.sqrt(X * X + Y * Y + Z * Z))
    return X / norm, Y / norm, Z / norm
