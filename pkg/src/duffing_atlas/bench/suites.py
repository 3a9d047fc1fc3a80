"""
ROLE: Acceptance criteria as named GateCheck producers, grouped into suites.

INPUTS:
  - acceptance grid (bench.grid_loader), suite name, worker count
OUTPUTS:
  - per-criterion records {name, checks, passed, runtime_ms}

CONFIG KEYS:
  - verify.workers: process count (1 runs in-process)
  - verify.start_method: multiprocessing start method for the pool

PERF / TIMING:
  - criteria are independent; with workers > 1 each runs in its own process and
    results are collected in submission order

FAILURE MODES:
  - unknown suite -> ValueError
  - IntegrationFailure inside a criterion propagates to the caller

LOG EVENTS:
  - module=bench.suites, event=criterion_finished, payload keys=criterion, passed, runtime_ms

TESTS:
  - tests/test_bench.py
"""

from __future__ import annotations

import math
import multiprocessing as mp
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from duffing_atlas.analysis.blowup import branches_for, chart_to_blowup_consistency, random_samples
from duffing_atlas.analysis.finite import (
    center_at_origin,
    classify_finite,
    coarse_kind,
    finite_equilibria,
    has_unique_finite_equilibrium,
    table_cell,
)
from duffing_atlas.analysis.infinity import (
    SADDLE_NODE,
    U1,
    chart_field,
    chart_jacobian,
    infinite_equilibria,
    sector_structure_at_infinity,
)
from duffing_atlas.bench.scoring import GateCheck, check_count, check_equal, check_max
from duffing_atlas.core.clock import elapsed_ms, now_ns
from duffing_atlas.dynamics.integrator import ESCAPED, IntegrationOptions, Trajectory, energy_drift, integrate
from duffing_atlas.model.field import divergence, dissipation_rate, jacobian, potential_critical_points, total_energy
from duffing_atlas.model.parameters import Parameters, PlaneState, degeneracy_flags
from duffing_atlas.oracle.centers import (
    GLOBAL_RADII,
    default_center_radii,
    limit_cycle_absence_check,
    numeric_center_test,
    numeric_global_center_test,
)
from duffing_atlas.oracle.cycles import detect_connection_cycles, even_degree_escape
from duffing_atlas.oracle.return_map import CLOSED, poincare_return
from duffing_atlas.portrait.census import census, census_signature
from duffing_atlas.portrait.classify import FIG_M_EVEN, FIG_M_ODD, classify_portrait


Criterion = Callable[[Dict[str, Any]], List[GateCheck]]


def _params(row: Sequence[float]) -> Parameters:
    """Grid rows are (m, sigma, epsilon, alpha)."""
    m, sigma, epsilon, alpha = row
    return Parameters(alpha=float(alpha), epsilon=float(epsilon), sigma=float(sigma), m=int(m))


def _sign_grid(values: Sequence[float], alphas: Sequence[float], ms: Sequence[int]) -> List[Parameters]:
    return [
        Parameters(alpha=float(a), epsilon=float(e), sigma=float(s), m=int(m))
        for m in ms
        for s in values
        for e in values
        for a in alphas
    ]


def table_reproduction(grid: Dict[str, Any]) -> List[GateCheck]:
    cfg = grid["tables"]
    agree = total = 0
    mismatches: List[str] = []
    for p in _sign_grid(cfg["values"], cfg["values"], cfg["m"]):
        for e in finite_equilibria(p):
            expected = table_cell(p, e.label)
            if expected is None:
                continue
            total += 1
            got = coarse_kind(classify_finite(p, e))
            if got == expected:
                agree += 1
            elif len(mismatches) < 5:
                mismatches.append(f"{p} {e.label}: {got} != {expected}")
    check = check_count("table_reproduction", agree, total)
    if mismatches:
        check = GateCheck(check.name, check.passed, check.expected, f"{check.actual}; {'; '.join(mismatches)}")
    return [check]


def global_center_returns(grid: Dict[str, Any]) -> List[GateCheck]:
    cfg = grid["centers"]
    checks: List[GateCheck] = []
    tol = float(cfg["close_tol"])
    for row in cfg["cases"]:
        p = _params(row)
        gaps: List[float] = []
        all_closed = True
        for r in cfg["radii"]:
            result = poincare_return(p, float(r), close_tol=tol)
            all_closed = all_closed and result.outcome == CLOSED
            gap = result.relative_gap()
            gaps.append(math.inf if gap is None else gap)
        check = check_max(f"global_center_returns[m={p.m}]", max(gaps), tol)
        checks.append(GateCheck(check.name, check.passed and all_closed, check.expected, check.actual))
    return checks


def even_degree_escapes(grid: Dict[str, Any]) -> List[GateCheck]:
    cfg = grid["escape"]
    checks: List[GateCheck] = []
    for m in cfg["m"]:
        p = Parameters(alpha=0.0, epsilon=1.0, sigma=1.0, m=int(m))
        traj = even_degree_escape(p, escape_radius=float(cfg["escape_radius"]), max_time=float(cfg["max_time"]))
        checks.append(check_equal(f"even_degree_escape[m={p.m}]", traj.termination.kind, ESCAPED))
    return checks


def no_limit_cycles(grid: Dict[str, Any]) -> List[GateCheck]:
    cfg = grid["limitcycles"]
    rng = np.random.default_rng(int(cfg["seed"]))
    a_lo, a_hi = cfg["alpha_range"]
    c_lo, c_hi = cfg["coefficient_range"]
    closed_hits = 0
    divergence_ok = 0
    draws = int(cfg["draws"])
    for _ in range(draws):
        signs = rng.choice([-1.0, 1.0], size=3)
        p = Parameters(
            alpha=float(signs[0] * rng.uniform(a_lo, a_hi)),
            epsilon=float(signs[1] * rng.uniform(c_lo, c_hi)),
            sigma=float(signs[2] * rng.uniform(c_lo, c_hi)),
            m=int(rng.choice(cfg["m"])),
        )
        verdict = limit_cycle_absence_check(p, cfg["radii"])
        closed_hits += len(verdict.evidence["closed_radii"])
        if divergence(p) == -p.alpha:
            divergence_ok += 1
    return [
        check_equal("no_limit_cycles.closed_returns", closed_hits, 0),
        check_count("no_limit_cycles.divergence", divergence_ok, draws),
    ]


def energy_conservation(grid: Dict[str, Any]) -> List[GateCheck]:
    cfg = grid["energy"]
    start = PlaneState(*cfg["start"])
    p = _params(cfg["conservative"])
    traj = integrate(p, start, IntegrationOptions(rel_tol=float(cfg["rel_tol"]), max_time=float(cfg["horizon"])))
    drift = energy_drift(p, traj)

    q = _params(cfg["dissipative"])
    opts = IntegrationOptions(
        rel_tol=float(cfg["rel_tol"]),
        max_step=float(cfg["dissipation_step"]),
        max_time=float(cfg["dissipation_horizon"]),
    )
    residuals = dissipation_residuals(q, integrate(q, start, opts), y_floor=float(cfg["y_floor"]))
    worst = float(np.max(residuals)) if residuals.size else None
    return [
        check_max("energy_conservation.drift", drift, float(cfg["drift_max"])),
        check_max("energy_conservation.dissipation_identity", worst, float(cfg["dissipation_rel_max"])),
    ]


def dissipation_residuals(p: Parameters, traj: Trajectory, y_floor: float = 0.1, trim: int = 3) -> np.ndarray:
    """Relative gap between dH/dt taken along the samples in time and -alpha*y^2.

    H(t) is interpolated by a cubic spline over the sample times and differentiated;
    samples with |y| <= y_floor and `trim` samples at each end are skipped.
    """
    times = np.asarray(traj.times, dtype=float)
    if times.shape[0] < 2 * trim + 4:
        return np.empty(0)
    order = np.argsort(times)
    times = times[order]
    states = np.asarray(traj.states, dtype=float)[order]
    gaps = np.diff(times)
    keep = np.concatenate(([True], gaps > 1e-3 * float(np.median(gaps))))
    times, states = times[keep], states[keep]
    energy = np.array([total_energy(p, PlaneState(float(x), float(y))) for x, y in states])
    rate = CubicSpline(times, energy).derivative()(times)
    exact = np.array([dissipation_rate(p, PlaneState(float(x), float(y))) for x, y in states])
    mask = np.abs(states[:, 1]) > y_floor
    mask[:trim] = False
    mask[-trim:] = False
    return np.abs(rate[mask] - exact[mask]) / np.abs(exact[mask])


def cycle_taxonomy(grid: Dict[str, Any]) -> List[GateCheck]:
    checks: List[GateCheck] = []
    for case in grid["cycles"]["cases"]:
        p = _params(case["params"])
        report = detect_connection_cycles(p)
        level_ok = report.level is not None and abs(report.level - float(case["level"])) < 1e-12
        passed = report.kind == case["kind"] and level_ok
        checks.append(
            GateCheck(
                name=f"cycle_taxonomy[m={p.m},sigma={p.sigma:g},epsilon={p.epsilon:g}]",
                passed=passed,
                expected=f"{case['kind']} level={case['level']}",
                actual=f"{report.kind} level={report.level}",
            )
        )
    return checks


def _index_at_infinity(p: Parameters) -> Optional[int]:
    """Index of the U2 origin forced by Poincare-Hopf on the sphere.

    Finite equilibria appear twice and the U2/V2 origins are the only infinite
    ones for m > 1, so 2 * sum(finite indices) + 2 * index = 2. None when a
    finite equilibrium is not elementary.
    """
    total = 0
    for x, _ in potential_critical_points(p):
        det = float(np.linalg.det(jacobian(p, x)))
        if det == 0.0:
            return None
        total += 1 if det > 0 else -1
    return 1 - total


def _sector_index(counts: Tuple[int, int, int]) -> Optional[int]:
    """Bendixson index 1 + (e - h) / 2 of a sector decomposition."""
    hyperbolic, _, elliptic = counts
    if (elliptic - hyperbolic) % 2:
        return None
    return 1 + (elliptic - hyperbolic) // 2


def infinite_equilibria_checks(grid: Dict[str, Any]) -> List[GateCheck]:
    cfg = grid["infinity"]
    checks: List[GateCheck] = []

    agree = total = 0
    for p in _sign_grid(cfg["values"], cfg["alpha"], [1]):
        if degeneracy_flags(p).stiffness_zero:
            continue
        total += 1
        if _m1_infinity_ok(p):
            agree += 1
    checks.append(check_count("infinite_equilibria.m1_case_split", agree, total))

    agree = total = 0
    for p in _sign_grid(cfg["values"], [1.0], cfg["m"]):
        total += 1
        expected = _index_at_infinity(p)
        if expected is not None and _sector_index(sector_structure_at_infinity(p).counts()) == expected:
            agree += 1
    checks.append(check_count("infinite_equilibria.sector_index", agree, total))

    samples = random_samples(int(cfg["samples"]), seed=int(cfg["seed"]))
    worst = 0.0
    for m in cfg["m"]:
        for sigma in (-1.0, 1.0):
            for epsilon in (-1.0, 1.0):
                p = Parameters(alpha=0.5, epsilon=epsilon, sigma=sigma, m=int(m))
                for branch in branches_for(p):
                    worst = max(worst, chart_to_blowup_consistency(p, branch, samples))
    checks.append(check_max("infinite_equilibria.blowup_consistency", worst, float(cfg["consistency_max"])))
    return checks


def _m1_infinity_ok(p: Parameters) -> bool:
    k = p.epsilon + p.sigma
    delta = p.alpha * p.alpha - 4.0 * k
    points = infinite_equilibria(p)
    flags = degeneracy_flags(p)
    if flags.discriminant_zero:
        return len(points) == 1 and points[0].kind == SADDLE_NODE
    if delta < 0:
        return not points
    if len(points) != 2:
        return False
    for e in points:
        if e.chart != U1 or max(abs(v) for v in chart_field(p, U1, e.u, 0.0)) > 1e-9:
            return False
        numeric = np.sort(np.linalg.eigvals(chart_jacobian(p, U1, e.u, 0.0)).real)
        closed = np.sort(np.asarray(e.eigenvalues, dtype=float))
        if not np.allclose(numeric, closed, rtol=1e-5, atol=1e-6):
            return False
    return True


def portrait_totality(grid: Dict[str, Any]) -> List[GateCheck]:
    cfg = grid["portraits"]
    points = _sign_grid(cfg["values"], cfg["alpha"], cfg["m"])
    assigned = 0
    signatures: Dict[str, set] = {}
    partition_ok = 0
    partition_total = 0
    inconsistent = 0
    for p in points:
        portrait = classify_portrait(p)
        if (portrait.panel is None) != (portrait.boundary is not None):
            continue
        assigned += 1
        c = census(p)
        if not c.consistent:
            inconsistent += 1
        if portrait.panel is not None:
            signatures.setdefault(portrait.label, set()).add(census_signature(c))
        if p.m >= 2 and portrait.panel is not None and portrait.figure in (FIG_M_EVEN, FIG_M_ODD):
            partition_total += 1
            if (portrait.figure == FIG_M_EVEN) == (p.m % 2 == 0):
                partition_ok += 1
    split = sorted(label for label, sigs in signatures.items() if len(sigs) != 1)
    return [
        check_count("portrait_totality.assigned", assigned, len(points)),
        check_equal("portrait_totality.panel_coherence", split, []),
        check_count("portrait_totality.parity_partition", partition_ok, partition_total),
        check_equal("portrait_totality.census_consistency", inconsistent, 0),
    ]


def center_oracle_agreement(grid: Dict[str, Any]) -> List[GateCheck]:
    cfg = grid["center_oracle"]
    radii = [float(r) for r in cfg.get("global_radii", GLOBAL_RADII)]
    local_agree = unique_agree = global_agree = total = 0
    for p in _sign_grid(cfg["values"], cfg["alpha"], cfg["m"]):
        if degeneracy_flags(p).degenerate:
            continue
        total += 1
        numeric = numeric_center_test(p, default_center_radii(p)).passed
        verdict = center_at_origin(p)
        if numeric == verdict.has_center:
            local_agree += 1
        if (numeric and has_unique_finite_equilibrium(p)) == verdict.is_local_center:
            unique_agree += 1
        if numeric_global_center_test(p, radii).passed == verdict.is_global_center:
            global_agree += 1
    return [
        check_count("center_oracle_agreement.center", local_agree, total),
        check_count("center_oracle_agreement.unique_center", unique_agree, total),
        check_count("center_oracle_agreement.global_center", global_agree, total),
    ]


CRITERIA: Dict[str, Criterion] = {
    "table_reproduction": table_reproduction,
    "global_center_returns": global_center_returns,
    "even_degree_escape": even_degree_escapes,
    "no_limit_cycles": no_limit_cycles,
    "energy_conservation": energy_conservation,
    "cycle_taxonomy": cycle_taxonomy,
    "infinite_equilibria": infinite_equilibria_checks,
    "portrait_totality": portrait_totality,
    "center_oracle_agreement": center_oracle_agreement,
}

SUITES: Dict[str, Tuple[str, ...]] = {
    "tables": ("table_reproduction",),
    "centers": ("global_center_returns", "center_oracle_agreement"),
    "escape": ("even_degree_escape",),
    "limitcycles": ("no_limit_cycles",),
    "energy": ("energy_conservation",),
    "cycles": ("cycle_taxonomy",),
    "infinity": ("infinite_equilibria",),
    "portraits": ("portrait_totality",),
    "all": tuple(CRITERIA),
}


def _run_criterion(name: str, grid: Dict[str, Any]) -> Dict[str, Any]:
    start = now_ns()
    checks = CRITERIA[name](grid)
    return {
        "name": name,
        "passed": bool(checks) and all(c.passed for c in checks),
        "checks": [c.to_dict() for c in checks],
        "runtime_ms": elapsed_ms(start),
    }


def run_suite(
    suite: str,
    grid: Dict[str, Any],
    workers: int = 1,
    start_method: str = "spawn",
    logger: Optional[Any] = None,
) -> List[Dict[str, Any]]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; expected one of: {', '.join(SUITES)}")
    names = SUITES[suite]
    if workers <= 1 or len(names) == 1:
        results = [_run_criterion(name, grid) for name in names]
    else:
        ctx = mp.get_context(start_method)
        with ProcessPoolExecutor(max_workers=min(workers, len(names)), mp_context=ctx) as pool:
            futures = [pool.submit(_run_criterion, name, grid) for name in names]
            results = [future.result() for future in futures]
    if logger is not None:
        for item in results:
            logger.emit(
                "info",
                "bench.suites",
                "criterion_finished",
                {"criterion": item["name"], "passed": item["passed"], "runtime_ms": item["runtime_ms"]},
            )
    return results
