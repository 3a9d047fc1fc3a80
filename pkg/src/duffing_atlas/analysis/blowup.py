"""
ROLE: Quasi-homogeneous directional blow-ups of the infinite equilibrium at
the origin of U2, and their numerical cross-check against the chart field.

Weights: odd m = 2n+1 uses (u, v) = (ubar rho^(n+1), vbar rho^n) with time
divided by rho^(2n^2 - n - 1); even m = 2n uses (ubar rho^(2n), vbar rho^(2n-1))
divided by rho^(4n^2 - 6n + 1). X-branches fix ubar = +-1 and evolve
(rho, vbar); Y-branches fix vbar = +-1 and evolve (rho, ubar).

FAILURE MODES:
  - branch parity or n inconsistent with m -> ParityMismatch
  - consistency sample with rho <= 0 -> InvalidParameters
  - printed exponent disagrees with the chart field -> log blowup_exponent_mismatch

LOG EVENTS:
  - module=analysis.blowup, event=blowup_exponent_mismatch, payload keys=branch, printed, empirical, error

TESTS:
  - tests/test_blowup.py
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from duffing_atlas.analysis.infinity import U2, chart_field
from duffing_atlas.core.errors import InvalidParameters, ParityMismatch
from duffing_atlas.model.field import int_power as pw
from duffing_atlas.model.parameters import Parameters


EVEN_M = "EvenM"
ODD_M = "OddM"

X_PLUS = "XPlus"
X_MINUS = "XMinus"
Y_PLUS = "YPlus"
Y_MINUS = "YMinus"
DIRECTIONS = (X_PLUS, X_MINUS, Y_PLUS, Y_MINUS)

CONSISTENCY_TOL = 1e-9


@dataclass(frozen=True)
class BlowupBranch:
    parity: str
    direction: str
    n: int

    @property
    def is_x(self) -> bool:
        return self.direction in (X_PLUS, X_MINUS)

    @property
    def sign(self) -> float:
        return 1.0 if self.direction in (X_PLUS, Y_PLUS) else -1.0

    @property
    def m(self) -> int:
        return 2 * self.n if self.parity == EVEN_M else 2 * self.n + 1

    def name(self) -> str:
        return f"{self.parity}:{self.direction}:n={self.n}"


def branch_for(p: Parameters, direction: str) -> BlowupBranch:
    if p.m < 2:
        raise ParityMismatch("blow-up branches are defined for m >= 2")
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown blow-up direction: {direction}")
    if p.m % 2 == 0:
        return BlowupBranch(EVEN_M, direction, p.m // 2)
    return BlowupBranch(ODD_M, direction, (p.m - 1) // 2)


def branches_for(p: Parameters) -> List[BlowupBranch]:
    return [branch_for(p, d) for d in DIRECTIONS]


def weights(b: BlowupBranch) -> Tuple[int, int]:
    if b.parity == EVEN_M:
        return 2 * b.n, 2 * b.n - 1
    return b.n + 1, b.n


def blowup_exponent(b: BlowupBranch) -> int:
    """Power of rho removed by the time rescaling."""
    if b.parity == EVEN_M:
        return 4 * b.n * b.n - 6 * b.n + 1
    return 2 * b.n * b.n - b.n - 1


def _check(p: Parameters, b: BlowupBranch) -> None:
    if b.n < 1 or b.m != p.m or b.parity not in (EVEN_M, ODD_M):
        raise ParityMismatch(f"branch {b.name()} does not match m={p.m}")
    if b.direction not in DIRECTIONS:
        raise ParityMismatch(f"unknown blow-up direction: {b.direction}")


def blowup_field(p: Parameters, b: BlowupBranch, rho: float, w: float) -> Tuple[float, float]:
    """Divided blow-up field (d rho, d w); w is vbar on X-branches, ubar on Y-branches."""
    _check(p, b)
    if b.parity == ODD_M:
        return _odd_field(p, b, rho, w)
    return _even_field(p, b, rho, w)


def _odd_field(p: Parameters, b: BlowupBranch, r: float, w: float) -> Tuple[float, float]:
    n = b.n
    a, e, s = p.alpha, p.epsilon, p.sigma
    if b.direction == X_PLUS:
        drho = r * (e * pw(r, 4 * n + 2) + pw(w, 2 * n) * (1.0 + a * pw(r, n + 1) + s * pw(r, 2 * n + 2))) / (n + 1)
        dw = (
            e * w * pw(r, 4 * n + 2)
            + a * pw(r, n + 1) * pw(w, 2 * n + 1)
            + s * pw(r, 2 * n + 2) * pw(w, 2 * n + 1)
            - n * pw(w, 2 * n + 1)
        ) / (n + 1)
        return drho, dw
    if b.direction == X_MINUS:
        drho = -r * (e * pw(r, 4 * n + 2) + pw(w, 2 * n) * (1.0 - a * pw(r, n + 1) + s * pw(r, 2 * n + 2))) / (n + 1)
        dw = (
            -e * w * pw(r, 4 * n + 2)
            + a * pw(r, n + 1) * pw(w, 2 * n + 1)
            - s * pw(r, 2 * n + 2) * pw(w, 2 * n + 1)
            + n * pw(w, 2 * n + 1)
        ) / (n + 1)
        return drho, dw
    # Both Y-branches coincide for odd m.
    bracket = e * pw(w, 2 * n + 1) * pw(r, 3 * n + 1) + a + s * w * pw(r, n + 1)
    drho = pw(r, n + 2) * bracket / n
    dw = (
        1.0 + a * w * pw(r, n + 1) + s * w * w * pw(r, 2 * n + 2) + e * pw(w, 2 * n + 2) * pw(r, 4 * n + 2)
    ) - (n + 1) * w * pw(r, n + 1) * bracket / n
    return drho, dw


def _even_field(p: Parameters, b: BlowupBranch, r: float, w: float) -> Tuple[float, float]:
    n = b.n
    a, e, s = p.alpha, p.epsilon, p.sigma
    if b.direction == X_PLUS:
        drho = r * (e * pw(r, 6 * n - 1) + pw(w, 2 * n - 1) * (1.0 + a * pw(r, 2 * n) + s * pw(r, 4 * n))) / (2 * n)
        dw = (
            e * w * pw(r, 6 * n - 1)
            + a * pw(r, 2 * n) * pw(w, 2 * n)
            + s * pw(r, 4 * n) * pw(w, 2 * n)
            - (2 * n - 1) * pw(w, 2 * n)
        ) / (2 * n)
        return drho, dw
    if b.direction == X_MINUS:
        drho = r * (e * pw(r, 6 * n - 1) - pw(w, 2 * n - 1) * (1.0 - a * pw(r, 2 * n) + s * pw(r, 4 * n))) / (2 * n)
        dw = (
            e * w * pw(r, 6 * n - 1)
            + a * pw(r, 2 * n) * pw(w, 2 * n)
            - s * pw(r, 4 * n) * pw(w, 2 * n)
            + (2 * n - 1) * pw(w, 2 * n)
        ) / (2 * n)
        return drho, dw
    if b.direction == Y_PLUS:
        bracket = e * pw(w, 2 * n) * pw(r, 4 * n - 1) + a + s * w * pw(r, 2 * n)
        regular = e * pw(w, 2 * n + 1) * pw(r, 6 * n - 1) + 1.0 + a * w * pw(r, 2 * n) + s * w * w * pw(r, 4 * n)
    else:
        bracket = e * pw(w, 2 * n) * pw(r, 4 * n - 1) - a - s * w * pw(r, 2 * n)
        regular = e * pw(w, 2 * n + 1) * pw(r, 6 * n - 1) - 1.0 - a * w * pw(r, 2 * n) - s * w * w * pw(r, 4 * n)
    drho = pw(r, 2 * n + 1) * bracket / (2 * n - 1)
    dw = regular - 2 * n * w * pw(r, 2 * n) * bracket / (2 * n - 1)
    return drho, dw


def _pushed_field(p: Parameters, b: BlowupBranch, rho: float, w: float, exponent: Optional[int] = None) -> Tuple[float, float]:
    """Substitute the blow-up into the U2 chart field and divide by rho**exponent."""
    a, bw = weights(b)
    s = b.sign
    if b.is_x:
        u, v = s * rho**a, w * rho**bw
        du, dv = chart_field(p, U2, u, v)
        drho = du / (s * a * rho ** (a - 1))
        dw = (dv - bw * w * rho ** (bw - 1) * drho) / rho**bw
    else:
        u, v = w * rho**a, s * rho**bw
        du, dv = chart_field(p, U2, u, v)
        drho = dv / (s * bw * rho ** (bw - 1))
        dw = (du - a * w * rho ** (a - 1) * drho) / rho**a
    k = blowup_exponent(b) if exponent is None else exponent
    scale = float(rho) ** k
    return drho / scale, dw / scale


def chart_to_blowup_consistency(
    p: Parameters,
    b: BlowupBranch,
    samples: Iterable[Tuple[float, float]],
    logger: Optional[Any] = None,
) -> float:
    """Maximum relative discrepancy between the pushed chart field and blowup_field."""
    _check(p, b)
    points = [(float(r), float(w)) for r, w in samples]
    worst = 0.0
    for rho, w in points:
        if rho <= 0.0:
            raise InvalidParameters(f"blow-up consistency requires rho > 0, got {rho}")
        closed = blowup_field(p, b, rho, w)
        pushed = _pushed_field(p, b, rho, w)
        for c_val, p_val in zip(closed, pushed):
            worst = max(worst, abs(c_val - p_val) / max(1.0, abs(c_val)))
    if worst > CONSISTENCY_TOL and logger is not None and points:
        logger.emit(
            "warning",
            "analysis.blowup",
            "blowup_exponent_mismatch",
            {
                "branch": b.name(),
                "printed": blowup_exponent(b),
                "empirical": empirical_blowup_exponent(p, b, points),
                "error": worst,
            },
        )
    return worst


def empirical_blowup_exponent(p: Parameters, b: BlowupBranch, samples: Sequence[Tuple[float, float]]) -> float:
    """Log-log fit of |undivided pushed d rho| / |closed d rho| against rho."""
    logs_rho: List[float] = []
    logs_ratio: List[float] = []
    for rho, w in samples:
        raw = _pushed_field(p, b, rho, w, exponent=0)[0]
        closed = blowup_field(p, b, rho, w)[0]
        if rho > 0 and raw != 0.0 and closed != 0.0:
            logs_rho.append(np.log(rho))
            logs_ratio.append(np.log(abs(raw / closed)))
    if len(logs_rho) < 2 or np.ptp(logs_rho) == 0.0:
        return float(blowup_exponent(b))
    slope, _ = np.polyfit(np.asarray(logs_rho), np.asarray(logs_ratio), 1)
    return float(slope)


def random_samples(count: int, seed: int = 0, rho_max: float = 0.5, w_max: float = 0.5) -> List[Tuple[float, float]]:
    """Samples with rho in (0, rho_max] and w in [-w_max, w_max]."""
    rng = np.random.default_rng(seed)
    rho = rho_max * (1.0 - rng.random(count))
    w = w_max * (2.0 * rng.random(count) - 1.0)
    return list(zip(rho.tolist(), w.tolist()))
