"""
ROLE: Poincare compactification atlas, compactified chart fields, infinite
equilibria and their sector structure.

Charts: U1/V1 cover x > 0 / x < 0 with (u, v) = (y/x, 1/x); U2/V2 cover
y > 0 / y < 0 with (u, v) = (x/y, 1/y); PlaneU3 is the finite plane. The
circle at infinity is v = 0. Chart transitions go through homogeneous
coordinates (X, Y, Z) with Z >= 0.

FAILURE MODES:
  - point outside a chart's domain -> OutOfChart
  - sector structure for m = 1 or sigma = 0 -> InvalidParameters

TESTS:
  - tests/test_infinity_analysis.py
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from duffing_atlas.core.errors import InvalidParameters, OutOfChart
from duffing_atlas.model.field import field_xy, int_power
from duffing_atlas.model.parameters import DEFAULT_DEGENERACY_TOL, Parameters, PlaneState, is_zero


U1 = "U1"
U2 = "U2"
V1 = "V1"
V2 = "V2"
PLANE = "PlaneU3"
CHARTS = (U1, U2, V1, V2, PLANE)

SADDLE = "Saddle"
STABLE_NODE = "StableNode"
UNSTABLE_NODE = "UnstableNode"
SADDLE_NODE = "SaddleNode"
LINEARLY_ZERO = "LinearlyZero"
NILPOTENT = "Nilpotent"

P_PLUS = "PPlus"
P_MINUS = "PMinus"
P_SINGLE = "P"


@dataclass(frozen=True)
class ChartPoint:
    chart: str
    u: float
    v: float


@dataclass(frozen=True)
class SectorStructure:
    hyperbolic: int = 0
    parabolic: int = 0
    elliptic: int = 0
    stability: Optional[str] = None

    def counts(self) -> Tuple[int, int, int]:
        return self.hyperbolic, self.parabolic, self.elliptic

    def to_dict(self) -> Dict[str, Any]:
        return {
            "hyperbolic": self.hyperbolic,
            "parabolic": self.parabolic,
            "elliptic": self.elliptic,
            "stability": self.stability,
        }


@dataclass(frozen=True)
class InfiniteEquilibrium:
    chart: str
    u: float
    kind: str
    sectors: Optional[SectorStructure] = None
    label: str = P_SINGLE
    eigenvalues: Optional[Tuple[float, float]] = None
    stability: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "chart": self.chart,
            "u": self.u,
            "label": self.label,
            "kind": self.kind,
            "eigenvalues": list(self.eigenvalues) if self.eigenvalues is not None else None,
            "stability": self.stability,
            "sectors": self.sectors.to_dict() if self.sectors is not None else None,
        }


def to_chart(s: PlaneState, c: str) -> Tuple[float, float]:
    if c == PLANE:
        return s.x, s.y
    if c in (U1, V1):
        if s.x == 0.0 or (s.x > 0) != (c == U1):
            raise OutOfChart(f"({s.x}, {s.y}) is outside chart {c}")
        return s.y / s.x, 1.0 / s.x
    if c in (U2, V2):
        if s.y == 0.0 or (s.y > 0) != (c == U2):
            raise OutOfChart(f"({s.x}, {s.y}) is outside chart {c}")
        return s.x / s.y, 1.0 / s.y
    raise OutOfChart(f"unknown chart: {c}")


def from_chart(c: str, u: float, v: float) -> PlaneState:
    """Inverse of to_chart; points on the circle at infinity have no plane image."""
    if c == PLANE:
        return PlaneState(u, v)
    if c not in CHARTS:
        raise OutOfChart(f"unknown chart: {c}")
    if v == 0.0 or (v > 0) != (c in (U1, U2)):
        raise OutOfChart(f"(u={u}, v={v}) has no finite image in chart {c}")
    if c in (U1, V1):
        return PlaneState(1.0 / v, u / v)
    return PlaneState(u / v, 1.0 / v)


def to_homogeneous(c: str, u: float, v: float) -> Tuple[float, float, float]:
    if c == PLANE:
        return u, v, 1.0
    if c == U1:
        return 1.0, u, v
    if c == V1:
        return -1.0, -u, -v
    if c == U2:
        return u, 1.0, v
    if c == V2:
        return -u, -1.0, -v
    raise OutOfChart(f"unknown chart: {c}")


def from_homogeneous(c: str, X: float, Y: float, Z: float) -> Tuple[float, float]:
    if c == PLANE:
        if Z <= 0.0:
            raise OutOfChart("point at infinity has no plane coordinates")
        return X / Z, Y / Z
    if c in (U1, V1):
        if X == 0.0 or (X > 0) != (c == U1):
            raise OutOfChart(f"homogeneous point ({X}, {Y}, {Z}) is outside chart {c}")
        return Y / X, Z / X
    if c in (U2, V2):
        if Y == 0.0 or (Y > 0) != (c == U2):
            raise OutOfChart(f"homogeneous point ({X}, {Y}, {Z}) is outside chart {c}")
        return X / Y, Z / Y
    raise OutOfChart(f"unknown chart: {c}")


def transition(source: str, target: str, u: float, v: float) -> Tuple[float, float]:
    return from_homogeneous(target, *to_homogeneous(source, u, v))


def chart_field(p: Parameters, c: str, u: float, v: float) -> Tuple[float, float]:
    """Compactified field of degree n = m, polynomial in (u, v)."""
    if c == PLANE:
        return field_xy(p, u, v)
    m = p.degree
    vm1 = int_power(v, m - 1)
    if c in (U1, V1):
        du = -p.epsilon - vm1 * (p.sigma + p.alpha * u + u * u)
        dv = -u * int_power(v, m)
    elif c in (U2, V2):
        du = p.epsilon * int_power(u, m + 1) + vm1 * (1.0 + p.alpha * u + p.sigma * u * u)
        dv = p.epsilon * int_power(u, m) * v + int_power(v, m) * (p.alpha + p.sigma * u)
    else:
        raise OutOfChart(f"unknown chart: {c}")
    if c in (V1, V2) and m % 2 == 0:
        return -du, -dv
    return du, dv


def chart_jacobian(p: Parameters, c: str, u: float, v: float, h: float = 1e-6) -> np.ndarray:
    jac = np.zeros((2, 2))
    for col, (du, dv) in enumerate(((h, 0.0), (0.0, h))):
        plus = chart_field(p, c, u + du, v + dv)
        minus = chart_field(p, c, u - du, v - dv)
        jac[:, col] = (np.asarray(plus) - np.asarray(minus)) / (2.0 * h)
    return jac


def infinite_equilibria(p: Parameters, tol: float = DEFAULT_DEGENERACY_TOL) -> List[InfiniteEquilibrium]:
    """Infinite equilibria in U1/U2; the antipodal copies in V1/V2 are implied."""
    if p.m > 1:
        kind = NILPOTENT if p.m % 2 == 0 else LINEARLY_ZERO
        sectors: Optional[SectorStructure] = None
        if not is_zero(p, p.sigma, tol):
            sectors = sector_structure_at_infinity(p, tol)
        stability = sectors.stability if sectors is not None else None
        if p.m % 2 == 0 and stability is None:
            stability = "unstable" if p.epsilon > 0 else "stable"
        return [InfiniteEquilibrium(chart=U2, u=0.0, kind=kind, sectors=sectors, stability=stability)]

    k = p.epsilon + p.sigma
    delta = p.alpha * p.alpha - 4.0 * k
    if is_zero(p, delta, tol):
        return [InfiniteEquilibrium(chart=U1, u=-p.alpha / 2.0, kind=SADDLE_NODE, eigenvalues=(0.0, p.alpha / 2.0))]
    if delta < 0:
        return []
    root = math.sqrt(delta)
    out: List[InfiniteEquilibrium] = []
    for label, u_star, radial in ((P_PLUS, (-p.alpha + root) / 2.0, -root), (P_MINUS, (-p.alpha - root) / 2.0, root)):
        transverse = -u_star
        kind, stability = _kind_from_diagonal(p, radial, transverse, tol)
        out.append(
            InfiniteEquilibrium(
                chart=U1,
                u=u_star,
                kind=kind,
                label=label,
                eigenvalues=(radial, transverse),
                stability=stability,
            )
        )
    out.sort(key=lambda e: e.u)
    return out


def _kind_from_diagonal(p: Parameters, a: float, b: float, tol: float) -> Tuple[str, Optional[str]]:
    if is_zero(p, a, tol) or is_zero(p, b, tol):
        return SADDLE_NODE, None
    if a * b < 0:
        return SADDLE, None
    if a < 0:
        return STABLE_NODE, "stable"
    return UNSTABLE_NODE, "unstable"


def sector_structure_at_infinity(p: Parameters, tol: float = DEFAULT_DEGENERACY_TOL) -> SectorStructure:
    """Sector decomposition of the infinite equilibrium at the origin of U2."""
    if p.m == 1:
        raise InvalidParameters("sector structure at infinity is defined for m > 1")
    if is_zero(p, p.sigma, tol):
        raise InvalidParameters("sector structure at infinity is undefined for sigma = 0")
    if p.m % 2 == 0:
        return SectorStructure(parabolic=3, stability="unstable" if p.epsilon > 0 else "stable")
    if p.epsilon > 0:
        return SectorStructure(hyperbolic=2)
    if p.sigma < 0:
        return SectorStructure(parabolic=2, elliptic=2)
    return SectorStructure(parabolic=4, elliptic=2)
