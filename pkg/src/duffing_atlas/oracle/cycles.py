"""
ROLE: Connection cycles of the conservative system and the even-degree escape check.

Saddles of the conservative flow are the strict local maxima of the
potential; their energy levels carry the homoclinic, heteroclinic or
double-homoclinic connections.

FAILURE MODES:
  - alpha != 0 -> InvalidParameters

TESTS:
  - tests/test_oracle.py
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from duffing_atlas.core.errors import InvalidParameters
from duffing_atlas.dynamics.integrator import ESCAPED, IntegrationOptions, Trajectory, integrate
from duffing_atlas.model.field import potential_critical_points, potential_energy
from duffing_atlas.model.parameters import Parameters, PlaneState, is_zero
from duffing_atlas.oracle.centers import OracleVerdict


NO_CYCLE = "NoCycle"
HOMOCLINIC = "Homoclinic"
HETEROCLINIC = "Heteroclinic"
DOUBLE_HOMOCLINIC = "DoubleHomoclinic"


@dataclass(frozen=True)
class CycleReport:
    kind: str
    saddles: List[PlaneState] = field(default_factory=list)
    level: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "saddles": [[s.x, s.y] for s in self.saddles],
            "level": self.level,
        }


def detect_connection_cycles(p: Parameters) -> CycleReport:
    if p.alpha != 0.0:
        raise InvalidParameters("connection cycles exist only for alpha = 0")
    if p.m == 1 or is_zero(p, p.sigma):
        return CycleReport(NO_CYCLE)
    maxima = [x for x, tag in potential_critical_points(p) if tag == "max"]
    if p.m % 2 == 0:
        if len(maxima) != 1:
            return CycleReport(NO_CYCLE)
        x = maxima[0]
        return CycleReport(HOMOCLINIC, [PlaneState(x, 0.0)], potential_energy(p, x))
    if p.sigma > 0 and p.epsilon < 0:
        saddles = [PlaneState(x, 0.0) for x in maxima]
        return CycleReport(HETEROCLINIC, saddles, potential_energy(p, maxima[-1]))
    if p.sigma < 0 and p.epsilon > 0:
        return CycleReport(DOUBLE_HOMOCLINIC, [PlaneState(0.0, 0.0)], potential_energy(p, 0.0))
    return CycleReport(NO_CYCLE)


def _centers(p: Parameters) -> List[float]:
    return [x for x, tag in potential_critical_points(p) if tag == "min"]


def connection_seeds(p: Parameters, report: CycleReport, offset: float = 1e-4) -> List[Tuple[PlaneState, PlaneState]]:
    """(seed, saddle) pairs: seeds sit `offset` inside the connection level, toward an enclosed center."""
    seeds: List[Tuple[PlaneState, PlaneState]] = []
    centers = _centers(p)
    for saddle in report.saddles:
        for center in centers:
            # Only centers adjacent to this saddle with no other saddle in between.
            lo, hi = sorted((saddle.x, center))
            if any(lo < s.x < hi for s in report.saddles):
                continue
            step = math.copysign(offset, center - saddle.x)
            seeds.append((PlaneState(saddle.x + step, 0.0), saddle))
    return seeds


def connection_containment(
    p: Parameters,
    report: CycleReport,
    duration: float = 50.0,
    offset: float = 1e-4,
) -> OracleVerdict:
    """Orbits seeded just inside each connection stay on their side of the saddle for `duration`."""
    seeds = connection_seeds(p, report, offset)
    extent = 2.0 * max([abs(x) for x, _ in potential_critical_points(p)] + [1.0]) + 1.0
    runs: List[Dict[str, Any]] = []
    passed = bool(seeds) or report.kind == NO_CYCLE
    for seed, saddle in seeds:
        traj = integrate(p, seed, IntegrationOptions(max_time=duration, escape_radius=extent * 10.0))
        side = math.copysign(1.0, seed.x - saddle.x)
        same_side = bool(all((z[0] - saddle.x) * side > 0 for z in traj.states))
        bounded = traj.termination.kind != ESCAPED and float(max(abs(traj.states[:, 0]).max(), abs(traj.states[:, 1]).max())) < extent
        runs.append({"seed": [seed.x, seed.y], "saddle": [saddle.x, saddle.y], "same_side": same_side, "bounded": bounded})
        passed = passed and same_side and bounded
    return OracleVerdict(name="connection_containment", passed=passed, evidence={"runs": runs, "extent": extent})


def even_degree_escape(p: Parameters, x0: Optional[float] = None, escape_radius: float = 1e6, max_time: float = 1e3) -> Trajectory:
    """Orbit from (x0, 0) on the unbounded side of the potential; escapes in finite time for even m."""
    if x0 is None:
        x0 = -10.0 * math.copysign(1.0, p.epsilon)
    return integrate(p, PlaneState(x0, 0.0), IntegrationOptions(escape_radius=escape_radius, max_time=max_time))
