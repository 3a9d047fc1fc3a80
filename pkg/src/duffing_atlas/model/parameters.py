"""
ROLE: Parameter and state records for the oscillator family, plus the
degeneracy flags marking parameter points on strict-inequality boundaries.

CONFIG KEYS:
  - analysis.degeneracy_tol: relative tolerance for boundary flags

FAILURE MODES:
  - epsilon == 0, m < 1, non-integer m, non-finite values -> InvalidParameters

TESTS:
  - tests/test_model_field.py
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict

from duffing_atlas.core.errors import InvalidParameters


DEFAULT_DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class Parameters:
    alpha: float
    epsilon: float
    sigma: float
    m: int

    def __post_init__(self) -> None:
        if isinstance(self.m, bool) or not isinstance(self.m, int):
            raise InvalidParameters(f"m must be an integer, got {self.m!r}")
        if self.m < 1:
            raise InvalidParameters(f"m must be >= 1, got {self.m}")
        for name in ("alpha", "epsilon", "sigma"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise InvalidParameters(f"{name} must be a finite real, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.epsilon == 0.0:
            raise InvalidParameters("epsilon must be nonzero")

    @property
    def stiffness(self) -> float:
        """Linear restoring coefficient: epsilon + sigma when m = 1, else sigma."""
        return self.epsilon + self.sigma if self.m == 1 else self.sigma

    @property
    def degree(self) -> int:
        """Degree of the polynomial field, used by the compactification."""
        return max(self.m, 1)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class PlaneState:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidParameters(f"state must be finite, got ({self.x}, {self.y})")
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def as_tuple(self) -> tuple:
        return (self.x, self.y)


@dataclass(frozen=True)
class DegeneracyFlags:
    sigma_zero: bool
    discriminant_zero: bool
    on_table_boundary: bool
    stiffness_zero: bool = False

    @property
    def degenerate(self) -> bool:
        """True when no portrait panel applies (a caption boundary)."""
        return self.sigma_zero or self.stiffness_zero

    def to_dict(self) -> Dict[str, bool]:
        data = asdict(self)
        data["degenerate"] = self.degenerate
        return data


def degeneracy_tolerance(p: Parameters, tol: float = DEFAULT_DEGENERACY_TOL) -> float:
    return tol * max(1.0, p.alpha * p.alpha, abs(p.epsilon + p.sigma))


def is_zero(p: Parameters, value: float, tol: float = DEFAULT_DEGENERACY_TOL) -> bool:
    return abs(value) <= degeneracy_tolerance(p, tol)


def degeneracy_flags(p: Parameters, tol: float = DEFAULT_DEGENERACY_TOL) -> DegeneracyFlags:
    """Flag equalities the stability tables and captions exclude.

    For m = 1 the discriminant is alpha^2 - 4(epsilon + sigma). For m > 1 it
    is the origin's alpha^2 - 4 sigma (only meaningful for sigma > 0) or the
    outer equilibria's alpha^2 + 4 sigma (m - 1) whenever they exist.
    """
    a2 = p.alpha * p.alpha
    if p.m == 1:
        k = p.epsilon + p.sigma
        stiffness_zero = is_zero(p, k, tol)
        discriminant_zero = (not stiffness_zero) and is_zero(p, a2 - 4.0 * k, tol)
        return DegeneracyFlags(
            sigma_zero=False,
            discriminant_zero=discriminant_zero,
            on_table_boundary=stiffness_zero or is_zero(p, p.alpha, tol),
            stiffness_zero=stiffness_zero,
        )

    sigma_zero = is_zero(p, p.sigma, tol)
    discriminant_zero = False
    if not sigma_zero:
        if p.sigma > 0 and is_zero(p, a2 - 4.0 * p.sigma, tol):
            discriminant_zero = True
        outer_exist = (p.m % 2 == 0) or (p.sigma * p.epsilon < 0)
        if outer_exist and is_zero(p, a2 + 4.0 * p.sigma * (p.m - 1), tol):
            discriminant_zero = True
    return DegeneracyFlags(
        sigma_zero=sigma_zero,
        discriminant_zero=discriminant_zero,
        on_table_boundary=sigma_zero or is_zero(p, p.alpha, tol),
    )
