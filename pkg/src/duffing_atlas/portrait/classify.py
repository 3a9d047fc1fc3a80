"""
ROLE: Route a parameter point to its global phase-portrait panel.

Routing goes alpha = 0 first, then m, then the sign conditions printed under
each panel. Points on a caption equality carry boundary="degenerate"; sign
corners no caption covers carry boundary="uncovered". Neither case is an
error.

CONFIG KEYS:
  - analysis.degeneracy_tol: tolerance for the caption equalities

TESTS:
  - tests/test_portrait.py
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from duffing_atlas.model.parameters import DEFAULT_DEGENERACY_TOL, Parameters, is_zero


FIG_ALPHA_ZERO = "Fig_AlphaZero"
FIG_M1 = "Fig_M1"
FIG_M_EVEN = "Fig_MEven"
FIG_M_ODD = "Fig_MOdd"
FIGURES = (FIG_ALPHA_ZERO, FIG_M1, FIG_M_EVEN, FIG_M_ODD)

DEGENERATE = "degenerate"
UNCOVERED = "uncovered"

# (sign sigma, sign epsilon, sign alpha) -> panel, shared by the even and odd figures.
_DAMPED_PANELS: Dict[Tuple[int, int, int], str] = {
    (1, 1, 1): "a",
    (1, 1, -1): "b",
    (-1, -1, 1): "c",
    (-1, -1, -1): "d",
    (1, -1, 1): "e",
    (1, -1, -1): "f",
    (-1, 1, 1): "g",
    (-1, 1, -1): "h",
}

# (sign epsilon, sign sigma) -> panel for alpha = 0.
_EVEN_UNDAMPED: Dict[Tuple[int, int], str] = {(-1, -1): "b", (1, -1): "c", (-1, 1): "d", (1, 1): "e"}
_ODD_UNDAMPED: Dict[Tuple[int, int], str] = {(-1, -1): "f", (-1, 1): "g", (1, -1): "h"}

# Captions print these degrees; other degrees of the same parity reuse them.
_CAPTIONED_EVEN = (2,)
_CAPTIONED_ODD = (3, 5)


@dataclass(frozen=True)
class PortraitClass:
    figure: str
    panel: Optional[str]
    conditions: str
    boundary: Optional[str] = None
    notes: List[str] = field(default_factory=list)

    @property
    def label(self) -> str:
        if self.panel is not None:
            return f"{self.figure}({self.panel})"
        return f"{self.figure}:{self.boundary}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "figure": self.figure,
            "panel": self.panel,
            "conditions": self.conditions,
            "boundary": self.boundary,
            "notes": list(self.notes),
        }


def classify_portrait(p: Parameters, tol: float = DEFAULT_DEGENERACY_TOL) -> PortraitClass:
    if is_zero(p, p.alpha, tol):
        return _undamped(p, tol)
    if p.m == 1:
        return _linear(p, tol)
    return _damped(p, tol)


def _undamped(p: Parameters, tol: float) -> PortraitClass:
    if p.m == 1:
        k = p.epsilon + p.sigma
        if is_zero(p, k, tol):
            return PortraitClass(FIG_ALPHA_ZERO, None, "m=1, alpha=0, epsilon+sigma=0", boundary=DEGENERATE,
                                 notes=["line of equilibria"])
        if k < 0:
            return PortraitClass(FIG_ALPHA_ZERO, "a", "m=1, alpha=0, epsilon+sigma<0")
        return PortraitClass(
            FIG_ALPHA_ZERO,
            None,
            "m=1, alpha=0, epsilon+sigma>0",
            boundary=UNCOVERED,
            notes=["no panel is captioned for this corner; the origin is a linear global center"],
        )

    if is_zero(p, p.sigma, tol):
        return PortraitClass(FIG_ALPHA_ZERO, None, f"m={p.m}, alpha=0, sigma=0", boundary=DEGENERATE)

    key = (_sign(p.epsilon), _sign(p.sigma))
    conditions = f"m={p.m}, alpha=0, {_signs(epsilon=key[0], sigma=key[1])}"
    if p.m % 2 == 0:
        notes = _extension_note(p.m, _CAPTIONED_EVEN, "even")
        return PortraitClass(FIG_ALPHA_ZERO, _EVEN_UNDAMPED[key], conditions, notes=notes)

    notes = _extension_note(p.m, _CAPTIONED_ODD, "odd")
    panel = _ODD_UNDAMPED.get(key)
    if panel is None:
        notes.append("no panel is captioned for sigma>0, epsilon>0; see the global-center verdict")
        return PortraitClass(FIG_ALPHA_ZERO, None, conditions, boundary=UNCOVERED, notes=notes)
    return PortraitClass(FIG_ALPHA_ZERO, panel, conditions, notes=notes)


def _linear(p: Parameters, tol: float) -> PortraitClass:
    k = p.epsilon + p.sigma
    if is_zero(p, k, tol):
        return PortraitClass(FIG_M1, None, "m=1, epsilon+sigma=0", boundary=DEGENERATE, notes=["line of equilibria"])
    delta = p.alpha * p.alpha - 4.0 * k
    a = _sign(p.alpha)
    alpha_text = "alpha>0" if a > 0 else "alpha<0"
    if is_zero(p, delta, tol):
        return PortraitClass(FIG_M1, "f" if a > 0 else "g", f"alpha^2=4(epsilon+sigma), {alpha_text}")
    if delta < 0:
        return PortraitClass(FIG_M1, "a" if a > 0 else "b", f"alpha^2<4(epsilon+sigma), {alpha_text}")
    if k < 0:
        return PortraitClass(FIG_M1, "d", "alpha^2>4(epsilon+sigma), epsilon+sigma<0")
    return PortraitClass(
        FIG_M1,
        "c" if a > 0 else "e",
        f"alpha^2>4(epsilon+sigma), {alpha_text}, epsilon+sigma>0",
    )


def _damped(p: Parameters, tol: float) -> PortraitClass:
    figure = FIG_M_EVEN if p.m % 2 == 0 else FIG_M_ODD
    if is_zero(p, p.sigma, tol):
        return PortraitClass(figure, None, f"m={p.m}, sigma=0", boundary=DEGENERATE)
    key = (_sign(p.sigma), _sign(p.epsilon), _sign(p.alpha))
    conditions = _signs(sigma=key[0], epsilon=key[1], alpha=key[2])
    return PortraitClass(figure, _DAMPED_PANELS[key], conditions)


def _extension_note(m: int, captioned: Tuple[int, ...], parity: str) -> List[str]:
    if m in captioned:
        return []
    shown = ",".join(str(v) for v in captioned)
    return [f"captions print m={shown}; applied to m={m} as an {parity} degree"]


def _signs(**signs: int) -> str:
    return ", ".join(f"{name}{'>' if s > 0 else '<'}0" for name, s in signs.items())


def _sign(value: float) -> int:
    return 1 if value > 0 else -1
