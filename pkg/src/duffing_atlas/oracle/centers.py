"""
ROLE: Numerical center, global-center and limit-cycle-absence verdicts.

CONFIG KEYS:
  - oracle.global_radii: section radii for the global-center test
  - oracle.close_tol / oracle.max_return_time: passed through to the return map

FAILURE MODES:
  - limit-cycle check with alpha = 0 -> InvalidParameters
  - EquilibriumStart / IntegrationFailure from the return map propagate

TESTS:
  - tests/test_oracle.py
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence

from duffing_atlas.analysis.finite import has_unique_finite_equilibrium
from duffing_atlas.analysis.infinity import SectorStructure, sector_structure_at_infinity
from duffing_atlas.core.config import get_path
from duffing_atlas.core.errors import InvalidParameters
from duffing_atlas.model.field import divergence, potential_critical_points, potential_energy
from duffing_atlas.model.parameters import Parameters
from duffing_atlas.oracle.return_map import (
    CLOSED,
    DEFAULT_CLOSE_TOL,
    DEFAULT_MAX_RETURN_TIME,
    ReturnMapResult,
    poincare_return,
)


GLOBAL_RADII = (0.1, 1.0, 5.0, 20.0, 100.0)


def oracle_settings(config: Dict[str, Any]) -> Dict[str, Any]:
    """Keyword arguments for the numeric center tests from the oracle.* keys."""
    return {
        "radii": [float(r) for r in get_path(config, "oracle.global_radii", GLOBAL_RADII)],
        "close_tol": float(get_path(config, "oracle.close_tol", DEFAULT_CLOSE_TOL)),
        "max_time": float(get_path(config, "oracle.max_return_time", DEFAULT_MAX_RETURN_TIME)),
    }


@dataclass(frozen=True)
class OracleVerdict:
    name: str
    passed: bool
    evidence: Dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "evidence": self.evidence}


def default_center_radii(p: Parameters) -> List[float]:
    """Small radii strictly inside the innermost connection level around the origin."""
    others = [x for x, _ in potential_critical_points(p) if x != 0.0]
    if not others:
        return [0.1, 0.5, 1.0]
    nearest = min(abs(x) for x in others)
    level = min(potential_energy(p, x) for x in others)
    radii = []
    for frac in (0.05, 0.1, 0.2, 0.3):
        r = frac * nearest
        # Keep radii whose energy sits well below the separatrix level.
        if level <= 0.0 or potential_energy(p, r) < 0.5 * level:
            radii.append(r)
    return radii or [0.05 * nearest]


def numeric_center_test(
    p: Parameters,
    radii: Iterable[float],
    close_tol: float = DEFAULT_CLOSE_TOL,
    max_time: float = DEFAULT_MAX_RETURN_TIME,
) -> OracleVerdict:
    results: List[ReturnMapResult] = [poincare_return(p, float(r), close_tol=close_tol, max_time=max_time) for r in radii]
    passed = bool(results) and all(res.outcome == CLOSED for res in results)
    return OracleVerdict(
        name="numeric_center_test",
        passed=passed,
        evidence={"returns": [res.to_dict() for res in results]},
    )


def numeric_global_center_test(
    p: Parameters,
    radii: Sequence[float] = GLOBAL_RADII,
    close_tol: float = DEFAULT_CLOSE_TOL,
    max_time: float = DEFAULT_MAX_RETURN_TIME,
) -> OracleVerdict:
    """Unique equilibrium, closed returns out to the largest radius, two hyperbolic sectors at infinity."""
    unique = has_unique_finite_equilibrium(p)
    sectors: Optional[SectorStructure] = None
    sector_ok = True
    if p.m > 1:
        try:
            sectors = sector_structure_at_infinity(p)
        except InvalidParameters:
            sectors = None
        sector_ok = sectors is not None and sectors.counts() == (2, 0, 0)
    evidence: Dict[str, Any] = {
        "unique_finite_equilibrium": unique,
        "sectors": sectors.to_dict() if sectors is not None else None,
        "sector_condition": sector_ok,
    }
    if not (unique and sector_ok):
        evidence["returns"] = "skipped"
        return OracleVerdict(name="numeric_global_center_test", passed=False, evidence=evidence)
    center = numeric_center_test(p, radii, close_tol=close_tol, max_time=max_time)
    evidence["returns"] = center.evidence["returns"]
    return OracleVerdict(name="numeric_global_center_test", passed=center.passed, evidence=evidence)


def limit_cycle_absence_check(
    p: Parameters,
    radii: Iterable[float],
    close_tol: float = DEFAULT_CLOSE_TOL,
) -> OracleVerdict:
    """Nonzero constant divergence plus no Closed return at the sampled radii."""
    if p.alpha == 0.0:
        raise InvalidParameters("limit-cycle absence check requires alpha != 0")
    div = divergence(p)
    analytic = div == -p.alpha and div != 0.0
    results = [poincare_return(p, float(r), close_tol=close_tol) for r in radii]
    closed = [res.radius for res in results if res.outcome == CLOSED]
    return OracleVerdict(
        name="limit_cycle_absence_check",
        passed=analytic and not closed,
        evidence={
            "divergence": div,
            "bendixson_hypothesis": analytic,
            "closed_radii": closed,
            "returns": [res.to_dict() for res in results],
        },
    )
