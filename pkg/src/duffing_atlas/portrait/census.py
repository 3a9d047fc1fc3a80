"""
ROLE: Qualitative census behind a portrait panel, the JSON report, and parameter sweeps.

The census merges the finite equilibria, the infinite equilibria, the
connection-cycle report (alpha = 0 only) and the center verdict. Cross-module
checks never rewrite a result; each violation becomes a diagnostic string
and a census_inconsistency log event.

CONFIG KEYS:
  - analysis.degeneracy_tol

FAILURE MODES:
  - errors from the analysis modules propagate
  - sweep over an unknown parameter or with steps < 2 -> InvalidParameters

LOG EVENTS:
  - module=portrait.census, event=census_inconsistency, payload keys=parameters, diagnostic

TESTS:
  - tests/test_portrait.py
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from duffing_atlas.analysis.finite import (
    CENTER,
    ORIGIN,
    SADDLE_POINT,
    CenterVerdict,
    Equilibrium,
    center_at_origin,
    coarse_kind,
    finite_equilibria,
    has_unique_finite_equilibrium,
    table_cell,
)
from duffing_atlas.analysis.infinity import InfiniteEquilibrium, infinite_equilibria
from duffing_atlas.core.errors import InvalidParameters
from duffing_atlas.model.parameters import DEFAULT_DEGENERACY_TOL, Parameters, degeneracy_flags, is_zero
from duffing_atlas.oracle.cycles import NO_CYCLE, CycleReport, detect_connection_cycles
from duffing_atlas.portrait.classify import PortraitClass, classify_portrait


SCHEMA = "duffing-atlas/1"
SWEEP_PARAMS = ("alpha", "epsilon", "sigma")

Signature = Tuple[Tuple[str, ...], Tuple[Tuple[Any, ...], ...], Optional[str]]


@dataclass(frozen=True)
class PortraitCensus:
    finite: List[Equilibrium]
    infinite: List[InfiniteEquilibrium]
    cycles: Optional[CycleReport]
    center: CenterVerdict
    diagnostics: List[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.diagnostics

    def to_dict(self) -> Dict[str, Any]:
        return {
            "finite": [e.to_dict() for e in self.finite],
            "infinite": [e.to_dict() for e in self.infinite],
            "cycles": self.cycles.to_dict() if self.cycles is not None else None,
            "center": self.center.to_dict(),
            "diagnostics": list(self.diagnostics),
        }


def census(p: Parameters, tol: float = DEFAULT_DEGENERACY_TOL, logger: Optional[Any] = None) -> PortraitCensus:
    finite = finite_equilibria(p, tol)
    infinite = infinite_equilibria(p, tol)
    cycles: Optional[CycleReport] = None
    if is_zero(p, p.alpha, tol):
        cycles = detect_connection_cycles(dataclasses.replace(p, alpha=0.0))
    center = center_at_origin(p, tol)
    diagnostics = _consistency(p, finite, cycles, center, tol)
    if logger is not None:
        for diagnostic in diagnostics:
            logger.emit(
                "warning",
                "portrait.census",
                "census_inconsistency",
                {"parameters": p.to_dict(), "diagnostic": diagnostic},
            )
    return PortraitCensus(finite=finite, infinite=infinite, cycles=cycles, center=center, diagnostics=diagnostics)


def _consistency(
    p: Parameters,
    finite: List[Equilibrium],
    cycles: Optional[CycleReport],
    center: CenterVerdict,
    tol: float = DEFAULT_DEGENERACY_TOL,
) -> List[str]:
    out: List[str] = []
    if len(finite) > 3:
        out.append(f"{len(finite)} finite equilibria, at most three expected")
    if p.m > 1 and not is_zero(p, p.sigma, tol) and has_unique_finite_equilibrium(p, tol) != (len(finite) == 1):
        out.append("uniqueness predicate disagrees with the equilibrium list")
    origin = next(e for e in finite if e.label == ORIGIN)
    if center.has_center and origin.kind != CENTER:
        out.append(f"center predicate holds but the origin is {origin.kind}")
    if center.is_global_center and not (len(finite) == 1 and origin.kind == CENTER):
        out.append("global center claimed without a single finite Center")
    for e in finite:
        expected = table_cell(p, e.label)
        if expected is not None and coarse_kind(e.kind) not in (expected, "degenerate"):
            out.append(f"{e.label} is {coarse_kind(e.kind)}, stability table says {expected}")
    if cycles is not None and cycles.kind != NO_CYCLE:
        saddles = {e.location.x for e in finite if e.kind == SADDLE_POINT}
        for s in cycles.saddles:
            if not any(np.isclose(s.x, x, rtol=1e-9, atol=1e-12) for x in saddles):
                out.append(f"{cycles.kind} cycle saddle at x={s.x} is not a finite saddle")
    return out


def census_signature(c: PortraitCensus) -> Signature:
    """Counts and kinds used to compare points sharing a panel."""
    finite = tuple(coarse_kind(e.kind) for e in c.finite)
    infinite = tuple(
        (e.kind, e.sectors.counts() if e.sectors is not None else None, e.stability) for e in c.infinite
    )
    return finite, infinite, c.cycles.kind if c.cycles is not None else None


def report(p: Parameters, tol: float = DEFAULT_DEGENERACY_TOL, logger: Optional[Any] = None) -> Dict[str, Any]:
    """JSON-ready portrait report."""
    portrait = classify_portrait(p, tol)
    c = census(p, tol, logger)
    return {
        "schema": SCHEMA,
        "parameters": p.to_dict(),
        "figure": portrait.figure,
        "panel": portrait.panel,
        "boundary": portrait.boundary,
        "conditions": portrait.conditions,
        "notes": list(portrait.notes),
        "global_center": c.center.is_global_center,
        "census": c.to_dict(),
        "degenerate_flags": degeneracy_flags(p, tol).to_dict(),
    }


def sweep(
    base: Parameters,
    param: str,
    start: float,
    stop: float,
    steps: int,
    tol: float = DEFAULT_DEGENERACY_TOL,
) -> Dict[str, Any]:
    """Classify `steps` evenly spaced points along one parameter and list where the panel changes."""
    if param not in SWEEP_PARAMS:
        raise InvalidParameters(f"sweep parameter must be one of {SWEEP_PARAMS}, got {param!r}")
    if steps < 2:
        raise InvalidParameters(f"sweep needs at least 2 steps, got {steps}")
    points: List[Dict[str, Any]] = []
    for value in np.linspace(float(start), float(stop), int(steps)):
        value = float(value)
        try:
            p = dataclasses.replace(base, **{param: value})
        except InvalidParameters as exc:
            points.append({"value": value, "label": "invalid", "figure": None, "panel": None,
                           "boundary": "invalid", "error": str(exc)})
            continue
        portrait: PortraitClass = classify_portrait(p, tol)
        points.append(
            {
                "value": value,
                "label": portrait.label,
                "figure": portrait.figure,
                "panel": portrait.panel,
                "boundary": portrait.boundary,
            }
        )
    boundaries = [
        {"between": [prev["value"], cur["value"]], "from": prev["label"], "to": cur["label"]}
        for prev, cur in zip(points, points[1:])
        if prev["label"] != cur["label"]
    ]
    return {
        "schema": SCHEMA,
        "base": base.to_dict(),
        "param": param,
        "points": points,
        "boundaries": boundaries,
    }
