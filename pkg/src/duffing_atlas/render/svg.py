"""
ROLE: Deterministic SVG rendering of a phase portrait on the Poincare disc.

The plane is drawn through the bounded radial map (x, y) -> (x, y) / (1 + r),
so the boundary circle stands for the directions at infinity. Finite
equilibria are dots, infinite equilibria are ticks on the circle, orbits are
polylines integrated forward and backward from each seed.

CONFIG KEYS:
  - render.disc_radius_px, render.arrow_density, render.orbit_time,
    render.escape_radius, render.draw_infinite_circle

FAILURE MODES:
  - non-positive dimensions / negative density -> InvalidParameters
  - IntegrationFailure on a seed -> samples so far drawn as a partial orbit,
    warning annotation in the document, log render_partial_orbit

LOG EVENTS:
  - module=render.svg, event=render_partial_orbit, payload keys=seed, last_time, message

TESTS:
  - tests/test_render.py
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from duffing_atlas.analysis.finite import (
    CENTER,
    DEGENERATE,
    SADDLE_POINT,
    STABLE_FOCUS,
    STABLE_NODE,
    UNSTABLE_FOCUS,
    UNSTABLE_NODE,
)
from duffing_atlas.analysis.infinity import SADDLE, SADDLE_NODE, U1, InfiniteEquilibrium
from duffing_atlas.core.config import get_path
from duffing_atlas.core.errors import IntegrationFailure, InvalidParameters
from duffing_atlas.dynamics.integrator import IntegrationOptions, integrate
from duffing_atlas.model.field import field_xy, jacobian
from duffing_atlas.model.parameters import DEFAULT_DEGENERACY_TOL, Parameters, PlaneState
from duffing_atlas.portrait.census import PortraitCensus, census


AUTO = "auto"
MARGIN_PX = 20
SVG_NS = "http://www.w3.org/2000/svg"

KIND_COLORS: Dict[str, str] = {
    SADDLE_POINT: "#d62728",
    STABLE_NODE: "#1f77b4",
    STABLE_FOCUS: "#1f77b4",
    UNSTABLE_NODE: "#ff7f0e",
    UNSTABLE_FOCUS: "#ff7f0e",
    CENTER: "#2ca02c",
    DEGENERATE: "#7f7f7f",
}
STABILITY_COLORS: Dict[Optional[str], str] = {"stable": "#1f77b4", "unstable": "#ff7f0e", None: "#7f7f7f"}

SeedSpec = Union[str, List[PlaneState]]


@dataclass(frozen=True)
class RenderSpec:
    disc_radius_px: int = 320
    orbit_seeds: SeedSpec = AUTO
    draw_infinite_circle: bool = True
    arrow_density: float = 0.02
    orbit_time: float = 30.0
    escape_radius: float = 1e3

    def __post_init__(self) -> None:
        if int(self.disc_radius_px) <= 0:
            raise InvalidParameters(f"disc_radius_px must be > 0, got {self.disc_radius_px}")
        if self.arrow_density < 0:
            raise InvalidParameters(f"arrow_density must be >= 0, got {self.arrow_density}")
        if self.orbit_time <= 0 or self.escape_radius <= 0:
            raise InvalidParameters("orbit_time and escape_radius must be > 0")
        if isinstance(self.orbit_seeds, str) and self.orbit_seeds != AUTO:
            raise InvalidParameters(f"orbit_seeds must be a list of states or {AUTO!r}")

    @classmethod
    def from_config(cls, config: Dict[str, Any], **overrides: Any) -> "RenderSpec":
        spec = cls(
            disc_radius_px=int(get_path(config, "render.disc_radius_px", 320)),
            draw_infinite_circle=bool(get_path(config, "render.draw_infinite_circle", True)),
            arrow_density=float(get_path(config, "render.arrow_density", 0.02)),
            orbit_time=float(get_path(config, "render.orbit_time", 30.0)),
            escape_radius=float(get_path(config, "render.escape_radius", 1e3)),
        )
        return replace(spec, **overrides) if overrides else spec


def disc_project(x: float, y: float) -> Tuple[float, float]:
    """Bounded radial map of the plane onto the open unit disc."""
    scale = 1.0 / (1.0 + math.hypot(x, y))
    return x * scale, y * scale


def parse_seeds(text: str) -> SeedSpec:
    """'auto' or 'x0,y0;x1,y1;...' as used on the command line."""
    text = text.strip()
    if text.lower() == AUTO:
        return AUTO
    seeds: List[PlaneState] = []
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        parts = chunk.split(",")
        if len(parts) != 2:
            raise InvalidParameters(f"seed must be 'x,y', got {chunk!r}")
        try:
            seeds.append(PlaneState(float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise InvalidParameters(f"bad seed {chunk!r}: {exc}") from exc
    return seeds


def auto_seeds(p: Parameters, c: PortraitCensus) -> List[PlaneState]:
    """Seeds around each equilibrium, along each saddle eigendirection, and on two outer rings."""
    seeds: List[PlaneState] = []
    for e in c.finite:
        x0 = e.location.x
        delta = 0.05 * max(1.0, abs(x0))
        if e.kind == SADDLE_POINT:
            _, vectors = np.linalg.eig(jacobian(p, x0))
            for k in range(2):
                vx, vy = (float(np.real(v)) for v in vectors[:, k])
                for sign in (1.0, -1.0):
                    seeds.append(PlaneState(x0 + sign * 1e-3 * vx, sign * 1e-3 * vy))
        else:
            for step in (delta, 2.0 * delta, 4.0 * delta):
                seeds.append(PlaneState(x0 + step, 0.0))
    if c.cycles is not None:
        for s in c.cycles.saddles:
            for sign in (1.0, -1.0):
                seeds.append(PlaneState(s.x + sign * 0.02 * max(1.0, abs(s.x)), 0.0))
    for r in (1.5, 4.0):
        seeds.extend([PlaneState(r, 0.0), PlaneState(-r, 0.0), PlaneState(0.0, r), PlaneState(0.0, -r)])
    unique: List[PlaneState] = []
    for s in seeds:
        if all(abs(s.x - u.x) > 1e-12 or abs(s.y - u.y) > 1e-12 for u in unique):
            unique.append(s)
    return unique


class _Canvas:
    def __init__(self, radius_px: int) -> None:
        self.radius = float(radius_px)
        self.center = float(radius_px + MARGIN_PX)
        self.size = int(2 * (radius_px + MARGIN_PX))

    def to_px(self, X: float, Y: float) -> Tuple[float, float]:
        return self.center + self.radius * X, self.center - self.radius * Y

    def plane_px(self, x: float, y: float) -> Tuple[float, float]:
        return self.to_px(*disc_project(x, y))


def _num(value: float) -> str:
    text = f"{value:.2f}"
    return "0.00" if text == "-0.00" else text


def _attrs(**attrs: Any) -> str:
    return " ".join(f'{key.rstrip("_").replace("_", "-")}="{value}"' for key, value in attrs.items())


def _orbit_points(p: Parameters, seed: PlaneState, spec: RenderSpec, logger: Optional[Any]) -> Tuple[np.ndarray, bool]:
    opts = IntegrationOptions(
        rel_tol=1e-8,
        abs_tol=1e-10,
        max_step=0.1,
        escape_radius=spec.escape_radius,
        max_time=spec.orbit_time,
    )
    pieces: List[np.ndarray] = []
    partial = False
    for backward in (True, False):
        try:
            states = integrate(p, seed, replace(opts, backward=backward)).states
        except IntegrationFailure as exc:
            partial = True
            states = exc.partial.states if exc.partial is not None else np.array([[seed.x, seed.y]])
            if logger is not None:
                logger.emit(
                    "warning",
                    "render.svg",
                    "render_partial_orbit",
                    {"seed": [seed.x, seed.y], "last_time": exc.last_time, "message": str(exc)},
                )
        pieces.append(states[::-1] if backward else states[1:])
    return np.vstack(pieces), partial


def _arrows(p: Parameters, canvas: _Canvas, density: float) -> List[str]:
    if density <= 0:
        return []
    spacing = 1.0 / density
    count = int(canvas.radius // spacing)
    out: List[str] = []
    for i in range(-count, count + 1):
        for j in range(-count, count + 1):
            X, Y = i * spacing / canvas.radius, j * spacing / canvas.radius
            rho = math.hypot(X, Y)
            if rho >= 0.95:
                continue
            # Invert the radial map, then push a short step along the field.
            scale = 1.0 / (1.0 - rho)
            x, y = X * scale, Y * scale
            fx, fy = field_xy(p, x, y)
            norm = math.hypot(fx, fy)
            if norm == 0.0 or not math.isfinite(norm):
                continue
            h = 1e-3 * max(1.0, math.hypot(x, y))
            X2, Y2 = disc_project(x + h * fx / norm, y + h * fy / norm)
            dX, dY = X2 - X, Y2 - Y
            d = math.hypot(dX, dY)
            if d == 0.0:
                continue
            length = 0.35 * spacing / canvas.radius
            x1, y1 = canvas.to_px(X, Y)
            x2, y2 = canvas.to_px(X + length * dX / d, Y + length * dY / d)
            out.append(
                f'<line class="arrow" {_attrs(x1=_num(x1), y1=_num(y1), x2=_num(x2), y2=_num(y2))} '
                f'marker-end="url(#arrowhead)" />'
            )
    return out


def _infinite_directions(e: InfiniteEquilibrium) -> List[Tuple[float, float]]:
    if e.chart == U1:
        norm = math.hypot(1.0, e.u)
        return [(1.0 / norm, e.u / norm), (-1.0 / norm, -e.u / norm)]
    norm = math.hypot(e.u, 1.0)
    return [(e.u / norm, 1.0 / norm), (-e.u / norm, -1.0 / norm)]


def _infinite_color(e: InfiniteEquilibrium) -> str:
    if e.kind in (SADDLE, SADDLE_NODE):
        return KIND_COLORS[SADDLE_POINT]
    return STABILITY_COLORS.get(e.stability, STABILITY_COLORS[None])


def render_disc(
    p: Parameters,
    spec: RenderSpec,
    logger: Optional[Any] = None,
    tol: float = DEFAULT_DEGENERACY_TOL,
) -> str:
    """Standalone SVG 1.1 document; identical inputs give identical bytes."""
    canvas = _Canvas(int(spec.disc_radius_px))
    c = census(p, tol, logger)
    seeds: Sequence[PlaneState] = auto_seeds(p, c) if spec.orbit_seeds == AUTO else list(spec.orbit_seeds)
    cx = _num(canvas.center)

    lines: List[str] = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg {_attrs(xmlns=SVG_NS, version="1.1", width=canvas.size, height=canvas.size)} '
        f'viewBox="0 0 {canvas.size} {canvas.size}">',
        f"<title>alpha={p.alpha!r} epsilon={p.epsilon!r} sigma={p.sigma!r} m={p.m}</title>",
        "<defs>",
        '<marker id="arrowhead" markerWidth="6" markerHeight="6" refX="5" refY="3" orient="auto">'
        '<path d="M0,0 L6,3 L0,6 z" fill="#999999" /></marker>',
        "</defs>",
    ]
    if spec.draw_infinite_circle:
        lines.append(
            f'<circle class="boundary" {_attrs(cx=cx, cy=cx, r=_num(canvas.radius))} '
            'fill="none" stroke="#000000" stroke-width="1.5" />'
        )

    arrows = _arrows(p, canvas, spec.arrow_density)
    if arrows:
        lines.append('<g class="arrows" stroke="#999999" stroke-width="0.8">')
        lines.extend(arrows)
        lines.append("</g>")

    warnings: List[str] = []
    if seeds:
        lines.append('<g class="orbits" fill="none" stroke="#333333" stroke-width="0.9">')
        for seed in seeds:
            points, partial = _orbit_points(p, seed, spec, logger)
            coords = " ".join(
                f"{_num(px)},{_num(py)}" for px, py in (canvas.plane_px(float(x), float(y)) for x, y in points)
            )
            css = "orbit partial" if partial else "orbit"
            lines.append(f'<polyline class="{css}" points="{coords}" />')
            if partial:
                warnings.append(f"partial orbit from ({seed.x:.6g}, {seed.y:.6g}): integration failed")
        lines.append("</g>")

    lines.append('<g class="infinite">')
    for e in c.infinite:
        color = _infinite_color(e)
        for dX, dY in _infinite_directions(e):
            x1, y1 = canvas.to_px(0.96 * dX, 0.96 * dY)
            x2, y2 = canvas.to_px(1.04 * dX, 1.04 * dY)
            lines.append(
                f'<line class="infinite-equilibrium" data-kind="{e.kind}" '
                f'{_attrs(x1=_num(x1), y1=_num(y1), x2=_num(x2), y2=_num(y2))} stroke="{color}" stroke-width="3" />'
            )
    lines.append("</g>")

    lines.append('<g class="finite">')
    for e in c.finite:
        px, py = canvas.plane_px(e.location.x, e.location.y)
        lines.append(
            f'<circle class="equilibrium" data-kind="{e.kind}" {_attrs(cx=_num(px), cy=_num(py))} '
            f'r="4" fill="{KIND_COLORS[e.kind]}" />'
        )
    lines.append("</g>")

    for k, text in enumerate(warnings):
        lines.append(f'<text class="warning" x="4" y="{14 + 14 * k}" font-size="11" fill="#d62728">{text}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_svg(document: str, path: Union[str, Path]) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(document, encoding="utf-8")
    return out
