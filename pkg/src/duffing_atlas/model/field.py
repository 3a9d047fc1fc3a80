"""
ROLE: Vector field of the oscillator and its closed-form scalar quantities.

The field is x' = y, y' = -alpha*y - epsilon*x**m - sigma*x with potential
U(x) = epsilon/(m+1) x^(m+1) + sigma/2 x^2 and energy H = y^2/2 + U(x).

FAILURE MODES:
  - canonical first integral with sigma <= 0 -> InvalidParameters

TESTS:
  - tests/test_model_field.py
"""

from __future__ import annotations

import math
from typing import List, Tuple

import numpy as np

from duffing_atlas.core.errors import InvalidParameters
from duffing_atlas.model.parameters import Parameters, PlaneState, is_zero


def int_power(x: float, m: int) -> float:
    """x**m for integer m >= 0 by repeated squaring; sign-correct for x < 0."""
    result = 1.0
    base = float(x)
    exp = int(m)
    while exp > 0:
        if exp & 1:
            result *= base
        base *= base
        exp >>= 1
    return result


def eval_field(p: Parameters, s: PlaneState) -> Tuple[float, float]:
    return field_xy(p, s.x, s.y)


def field_xy(p: Parameters, x: float, y: float) -> Tuple[float, float]:
    return y, -p.alpha * y - p.epsilon * int_power(x, p.m) - p.sigma * x


def jacobian(p: Parameters, x: float) -> np.ndarray:
    """Exact Jacobian of the field at (x, any y)."""
    dfdx = -p.epsilon * p.m * int_power(x, p.m - 1) - p.sigma
    return np.array([[0.0, 1.0], [dfdx, -p.alpha]])


def numeric_jacobian(p: Parameters, s: PlaneState, h: float = 0.0) -> np.ndarray:
    """Central-difference Jacobian; h defaults to 1e-5 * max(1, |s|)."""
    step = h if h > 0 else 1e-5 * max(1.0, s.norm())
    jac = np.zeros((2, 2))
    for col, (dx, dy) in enumerate(((step, 0.0), (0.0, step))):
        plus = field_xy(p, s.x + dx, s.y + dy)
        minus = field_xy(p, s.x - dx, s.y - dy)
        jac[:, col] = (np.asarray(plus) - np.asarray(minus)) / (2.0 * step)
    return jac


def divergence(p: Parameters) -> float:
    return -p.alpha


def potential_energy(p: Parameters, x: float) -> float:
    return p.epsilon / (p.m + 1) * int_power(x, p.m + 1) + 0.5 * p.sigma * x * x


def potential_derivative(p: Parameters, x: float) -> float:
    return p.epsilon * int_power(x, p.m) + p.sigma * x


def total_energy(p: Parameters, s: PlaneState) -> float:
    return 0.5 * s.y * s.y + potential_energy(p, s.x)


def dissipation_rate(p: Parameters, s: PlaneState) -> float:
    """Exact dH/dt along the flow."""
    return -p.alpha * s.y * s.y


def canonical_first_integral(p: Parameters, u: float, v: float) -> float:
    """First integral of the rescaled conservative system (sigma > 0)."""
    if p.sigma <= 0:
        raise InvalidParameters(f"canonical first integral requires sigma > 0, got {p.sigma}")
    return u * u + v * v + 2.0 * p.epsilon / (p.sigma * (p.m + 1)) * int_power(u, p.m + 1)


def to_canonical(p: Parameters, s: PlaneState) -> Tuple[float, float]:
    """(x, y) -> (u, v) = (x, y / sqrt(sigma)) with time rescaled by sqrt(sigma)."""
    if p.sigma <= 0:
        raise InvalidParameters(f"canonical coordinates require sigma > 0, got {p.sigma}")
    return s.x, s.y / math.sqrt(p.sigma)


def canonical_rescaled_field(p: Parameters, u: float, v: float) -> Tuple[float, float]:
    """du/dtau = v, dv/dtau = -u - (epsilon/sigma) u^m; conserves canonical_first_integral."""
    if p.sigma <= 0:
        raise InvalidParameters(f"canonical form requires sigma > 0, got {p.sigma}")
    return v, -u - (p.epsilon / p.sigma) * int_power(u, p.m)


def potential_critical_points(p: Parameters, tol: float = 1e-12) -> List[Tuple[float, str]]:
    """Critical points of U sorted by x, tagged max, min or flat by U''.

    A strict local maximum is a saddle of the conservative system, a strict
    local minimum a center.
    """
    points = [0.0]
    if p.m > 1 and not is_zero(p, p.sigma, tol):
        c = -p.sigma / p.epsilon
        k = p.m - 1
        if k % 2 == 0:
            if c > 0:
                root = c ** (1.0 / k)
                points.extend([-root, root])
        else:
            points.append(math.copysign(abs(c) ** (1.0 / k), c))
    out: List[Tuple[float, str]] = []
    for x in sorted(points):
        second = p.m * p.epsilon * int_power(x, p.m - 1) + p.sigma
        if is_zero(p, second, tol):
            tag = "flat"
        elif second < 0:
            tag = "max"
        else:
            tag = "min"
        out.append((x, tag))
    return out
