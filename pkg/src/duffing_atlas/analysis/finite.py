"""
ROLE: Finite equilibria: enumeration, closed-form eigenvalues, classification
against the published stability tables, and the center/global-center predicates.

CONFIG KEYS:
  - analysis.degeneracy_tol: relative tolerance for boundary equalities

FAILURE MODES:
  - label absent for the parameters -> MissingEquilibrium
  - purely-imaginary query with m = 1 -> InvalidParameters
  - boundary equalities -> kind Degenerate (never a guess)

TESTS:
  - tests/test_finite_analysis.py
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from duffing_atlas.core.errors import InvalidParameters, MissingEquilibrium
from duffing_atlas.model.parameters import DEFAULT_DEGENERACY_TOL, Parameters, PlaneState, is_zero


ORIGIN = "Origin"
E_PLUS = "EPlus"
E_MINUS = "EMinus"
LABELS = (ORIGIN, E_PLUS, E_MINUS)

SADDLE_POINT = "SaddlePoint"
STABLE_NODE = "StableNode"
UNSTABLE_NODE = "UnstableNode"
STABLE_FOCUS = "StableFocus"
UNSTABLE_FOCUS = "UnstableFocus"
CENTER = "Center"
DEGENERATE = "Degenerate"
KINDS = (SADDLE_POINT, STABLE_NODE, UNSTABLE_NODE, STABLE_FOCUS, UNSTABLE_FOCUS, CENTER, DEGENERATE)

_COARSE = {
    SADDLE_POINT: "saddle",
    STABLE_NODE: "stable",
    STABLE_FOCUS: "stable",
    UNSTABLE_NODE: "unstable",
    UNSTABLE_FOCUS: "unstable",
    CENTER: "center",
    DEGENERATE: "degenerate",
}

# (sign sigma, sign epsilon, sign alpha) -> (origin, E+, E-); None marks a "---" cell.
ODD_TABLE: Dict[Tuple[int, int, int], Tuple[str, Optional[str], Optional[str]]] = {
    (1, 1, 1): ("stable", None, None),
    (1, 1, -1): ("unstable", None, None),
    (-1, -1, 1): ("saddle", None, None),
    (-1, -1, -1): ("saddle", None, None),
    (1, -1, 1): ("stable", "saddle", "saddle"),
    (1, -1, -1): ("unstable", "saddle", "saddle"),
    (-1, 1, 1): ("saddle", "stable", "stable"),
    (-1, 1, -1): ("saddle", "unstable", "unstable"),
}
EVEN_TABLE: Dict[Tuple[int, int, int], Tuple[str, Optional[str], Optional[str]]] = {
    (1, 1, 1): ("stable", None, None),
    (1, 1, -1): ("unstable", None, None),
    (-1, -1, 1): ("saddle", None, None),
    (-1, -1, -1): ("saddle", None, None),
    (1, -1, 1): ("stable", "saddle", None),
    (1, -1, -1): ("unstable", "saddle", None),
    (-1, 1, 1): ("saddle", "stable", None),
    (-1, 1, -1): ("saddle", "unstable", None),
}


@dataclass(frozen=True)
class Equilibrium:
    location: PlaneState
    eigenvalues: Tuple[complex, complex]
    kind: str
    label: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "location": [self.location.x, self.location.y],
            "eigenvalues": [[z.real, z.imag] for z in self.eigenvalues],
            "kind": self.kind,
        }


@dataclass(frozen=True)
class CenterVerdict:
    is_local_center: bool
    is_global_center: bool
    witness: str
    has_center: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "is_local_center": self.is_local_center,
            "is_global_center": self.is_global_center,
            "has_center": self.has_center,
            "witness": self.witness,
        }


def coarse_kind(kind: str) -> str:
    return _COARSE[kind]


def table_cell(p: Parameters, label: str) -> Optional[str]:
    """Expected coarse kind from the stability tables, None when not applicable."""
    if p.m == 1 or p.alpha == 0.0 or p.sigma == 0.0:
        return None
    key = (_sign(p.sigma), _sign(p.epsilon), _sign(p.alpha))
    row = (ODD_TABLE if p.m % 2 == 1 else EVEN_TABLE)[key]
    return row[LABELS.index(label)]


def _outer_positions(p: Parameters, tol: float) -> List[Tuple[str, float]]:
    if p.m == 1 or is_zero(p, p.sigma, tol):
        return []
    c = -p.sigma / p.epsilon
    k = p.m - 1
    if p.m % 2 == 1:
        if c <= 0:
            return []
        root = c ** (1.0 / k)
        return [(E_MINUS, -root), (E_PLUS, root)]
    return [(E_PLUS, math.copysign(abs(c) ** (1.0 / k), c))]


def _trace_det(p: Parameters, label: str) -> Tuple[float, float]:
    if label == ORIGIN:
        return -p.alpha, p.stiffness
    return -p.alpha, -p.sigma * (p.m - 1)


def _roots(trace: float, det: float) -> Tuple[complex, complex]:
    root = cmath.sqrt(complex(trace * trace - 4.0 * det))
    return (complex(trace) + root) / 2.0, (complex(trace) - root) / 2.0


def _require(p: Parameters, label: str, tol: float) -> None:
    if label not in LABELS:
        raise MissingEquilibrium(f"unknown equilibrium label: {label}")
    if label == ORIGIN:
        return
    present = {name for name, _ in _outer_positions(p, tol)}
    if label not in present:
        raise MissingEquilibrium(f"{label} does not exist for {p}")


def eigenvalues_at(p: Parameters, label: str, tol: float = DEFAULT_DEGENERACY_TOL) -> Tuple[complex, complex]:
    """Closed-form eigenvalue pair, the +sqrt root first."""
    _require(p, label, tol)
    return _roots(*_trace_det(p, label))


def _kind_from(p: Parameters, trace: float, det: float, tol: float) -> str:
    if is_zero(p, det, tol):
        return DEGENERATE
    if det < 0:
        return SADDLE_POINT
    if is_zero(p, trace, tol):
        return CENTER
    disc = trace * trace - 4.0 * det
    if is_zero(p, disc, tol):
        return DEGENERATE
    stable = trace < 0
    if disc < 0:
        return STABLE_FOCUS if stable else UNSTABLE_FOCUS
    return STABLE_NODE if stable else UNSTABLE_NODE


def classify_finite(p: Parameters, e: Equilibrium, tol: float = DEFAULT_DEGENERACY_TOL) -> str:
    return _kind_from(p, *_trace_det(p, e.label), tol)


def finite_equilibria(p: Parameters, tol: float = DEFAULT_DEGENERACY_TOL) -> List[Equilibrium]:
    """All finite equilibria sorted by x."""
    out: List[Equilibrium] = []
    for label, x in [(ORIGIN, 0.0)] + _outer_positions(p, tol):
        trace, det = _trace_det(p, label)
        out.append(
            Equilibrium(
                location=PlaneState(x, 0.0),
                eigenvalues=_roots(trace, det),
                kind=_kind_from(p, trace, det, tol),
                label=label,
            )
        )
    out.sort(key=lambda e: e.location.x)
    return out


def equilibrium(p: Parameters, label: str, tol: float = DEFAULT_DEGENERACY_TOL) -> Equilibrium:
    _require(p, label, tol)
    for e in finite_equilibria(p, tol):
        if e.label == label:
            return e
    raise MissingEquilibrium(f"{label} does not exist for {p}")


def purely_imaginary_at(p: Parameters, label: str, tol: float = DEFAULT_DEGENERACY_TOL) -> bool:
    if p.m == 1:
        raise InvalidParameters("purely imaginary test is defined for m > 1")
    if not is_zero(p, p.alpha, tol):
        return False
    if label == ORIGIN:
        return p.sigma > 0
    if label == E_PLUS:
        return p.sigma < 0
    if label == E_MINUS:
        return p.sigma < 0 if p.m % 2 == 1 else p.sigma > 0
    raise MissingEquilibrium(f"unknown equilibrium label: {label}")


def has_unique_finite_equilibrium(p: Parameters, tol: float = DEFAULT_DEGENERACY_TOL) -> bool:
    """True for m = 1, and for m > 1 exactly when m is odd and sigma*epsilon > 0.

    sigma = 0 with m > 1 is False: the origin is then the only root but a degenerate one.
    """
    if p.m == 1:
        return True
    if is_zero(p, p.sigma, tol):
        return False
    return p.m % 2 == 1 and p.sigma * p.epsilon > 0


def center_at_origin(p: Parameters, tol: float = DEFAULT_DEGENERACY_TOL) -> CenterVerdict:
    alpha_zero = is_zero(p, p.alpha, tol)
    if p.m == 1:
        ok = alpha_zero and p.epsilon + p.sigma > 0
        witness = (
            "linear system with zero damping and positive stiffness epsilon+sigma: linear center, "
            "unique equilibrium, so global center"
            if ok
            else "linear system: center requires alpha = 0 and epsilon + sigma > 0"
        )
        return CenterVerdict(is_local_center=ok, is_global_center=ok, witness=witness, has_center=ok)

    has_center = alpha_zero and p.sigma > 0
    unique_center = has_center and p.m % 2 == 1 and p.epsilon > 0
    if unique_center:
        witness = (
            "odd degree, alpha = 0, sigma > 0, epsilon > 0: unique equilibrium of linear center type; "
            "two hyperbolic sectors at infinity make it a global center"
        )
    elif has_center and p.m % 2 == 0:
        witness = (
            "alpha = 0 and sigma > 0: the origin is a center, but even degree admits no global center"
        )
    elif has_center:
        witness = "alpha = 0 and sigma > 0: the origin is a center bounded by a heteroclinic cycle"
    else:
        witness = "the origin is a center if and only if alpha = 0 and sigma > 0"
    return CenterVerdict(
        is_local_center=unique_center,
        is_global_center=unique_center,
        witness=witness,
        has_center=has_center,
    )


def _sign(value: float) -> int:
    return 1 if value > 0 else -1
