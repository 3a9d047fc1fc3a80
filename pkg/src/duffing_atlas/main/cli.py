"""
ROLE: Command-line entrypoint: classify, simulate, portrait, verify, sweep.

CONFIG KEYS:
  - every section of configs/default.yaml; --config overlays a YAML file

FAILURE MODES:
  - bad arguments or parameters (epsilon = 0, m < 1, ...) -> exit 2
  - a verification criterion fails -> exit 3
  - IntegrationFailure -> exit 4

LOG EVENTS:
  - module=main.cli, event=command_failed, payload keys=command, error, exit_code
  - module=main.cli, event=verify_finished, payload keys=suite, passed, report

TESTS:
  - tests/test_cli.py
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Dict, List, Optional

from duffing_atlas.bench.grid_loader import DEFAULT_GRID_NAME, load_grid
from duffing_atlas.bench.report_schema import create_report, write_report
from duffing_atlas.bench.scoring import GateCheck, summarize
from duffing_atlas.bench.suites import SUITES, run_suite
from duffing_atlas.core.artifacts import create_run_dir, write_run_log, write_run_metadata
from duffing_atlas.core.config import INTEGRATION_METHODS, get_path, load_config
from duffing_atlas.core.errors import IntegrationFailure
from duffing_atlas.core.logging import LogEmitter, emitter_from_config
from duffing_atlas.dynamics.disc import integrate_on_disc
from duffing_atlas.dynamics.export import write_csv, write_json
from duffing_atlas.dynamics.integrator import IntegrationOptions, integrate
from duffing_atlas.model.parameters import Parameters, PlaneState
from duffing_atlas.oracle.centers import numeric_global_center_test, oracle_settings
from duffing_atlas.portrait.census import SWEEP_PARAMS, report, sweep
from duffing_atlas.render.svg import RenderSpec, parse_seeds, render_disc, write_svg
from duffing_atlas.version import __version__


EXIT_OK = 0
EXIT_INVALID = 2
EXIT_VERIFY_FAILED = 3
EXIT_INTEGRATION_FAILED = 4


class UsageError(ValueError):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default="", help="YAML config overlaid on the defaults")
    common.add_argument("--log-level", default="", help="Override logging.level")

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument("--alpha", type=float, default=None, help="Damping coefficient")
    params.add_argument("--epsilon", type=float, default=None, help="Nonlinear coefficient (nonzero)")
    params.add_argument("--sigma", type=float, default=None, help="Linear stiffness")
    params.add_argument("--m", type=int, default=None, help="Degree of the nonlinearity (>= 1)")

    parser = argparse.ArgumentParser(
        prog="duffing-atlas",
        description="Classify, simulate and verify the generalized Duffing oscillator x' = y, y' = -alpha y - epsilon x^m - sigma x",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    classify = sub.add_parser("classify", parents=[common, params], help="Portrait panel and census")
    classify.add_argument("--json", action="store_true", help="Emit the JSON report")
    classify.add_argument(
        "--numeric", action="store_true", help="Also run the return-map global-center test (oracle.* keys)"
    )

    simulate = sub.add_parser("simulate", parents=[common, params], help="Integrate one orbit")
    simulate.add_argument("--x0", type=float, required=True)
    simulate.add_argument("--y0", type=float, required=True)
    simulate.add_argument("--tmax", type=float, required=True, help="Integration horizon")
    simulate.add_argument("--tol", type=float, default=None, help="Relative tolerance (absolute is tol/100)")
    simulate.add_argument("--method", choices=INTEGRATION_METHODS, default=None)
    simulate.add_argument("--backward", action="store_true", help="Integrate in negative time")
    simulate.add_argument("--disc", action="store_true", help="Integrate on the Poincare disc through the charts")
    simulate.add_argument("--csv", default="", help="Write samples as CSV (t,x,y)")
    simulate.add_argument("--json", default="", help="Write the trajectory as JSON")

    portrait = sub.add_parser("portrait", parents=[common, params], help="Render the disc portrait as SVG")
    portrait.add_argument("--out", required=True, help="Output SVG path")
    portrait.add_argument("--seeds", default="auto", help="'auto' or 'x0,y0;x1,y1;...'")
    portrait.add_argument("--radius-px", type=int, default=None)
    portrait.add_argument("--arrow-density", type=float, default=None)
    portrait.add_argument("--no-circle", action="store_true", help="Omit the circle at infinity")

    verify = sub.add_parser("verify", parents=[common], help="Run acceptance criteria")
    verify.add_argument("--suite", choices=tuple(SUITES), default="all")
    verify.add_argument("--grid", default=DEFAULT_GRID_NAME, help="'default' or a YAML grid path")
    verify.add_argument("--workers", type=int, default=None, help="Worker processes (default verify.workers)")
    verify.add_argument(
        "--output-dir", default=None, help="Write VerifyReport.json into a new run directory here (default runtime.artifacts.dir)"
    )

    sweep_p = sub.add_parser("sweep", parents=[common, params], help="Panel boundaries along one parameter")
    sweep_p.add_argument("--param", choices=SWEEP_PARAMS, required=True)
    sweep_p.add_argument("--from", dest="start", type=float, required=True)
    sweep_p.add_argument("--to", dest="stop", type=float, required=True)
    sweep_p.add_argument("--steps", type=int, required=True)
    sweep_p.add_argument("--json", action="store_true", help="Emit the JSON sweep")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_INVALID

    logger: Optional[LogEmitter] = None
    try:
        config = load_config(args.config or None)
        if args.log_level:
            config["logging"]["level"] = args.log_level
        logger = emitter_from_config(config, run_id=str(get_path(config, "runtime.run_id", "") or "") or None)
        handler = _COMMANDS[args.command]
        return handler(args, config, logger)
    except IntegrationFailure as exc:
        return _fail(logger, args.command, f"integration failed at t={exc.last_time}: {exc}", EXIT_INTEGRATION_FAILED)
    except (ValueError, FileNotFoundError) as exc:
        return _fail(logger, args.command, str(exc), EXIT_INVALID)


def _fail(logger: Optional[LogEmitter], command: str, message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    if logger is not None:
        logger.emit("error", "main.cli", "command_failed", {"command": command, "error": message, "exit_code": code})
    return code


def _parameters(args: argparse.Namespace, swept: Optional[str] = None) -> Parameters:
    values: Dict[str, Any] = {}
    missing = []
    for name in ("alpha", "epsilon", "sigma", "m"):
        value = getattr(args, name)
        if value is None and name == swept:
            # Placeholder; the sweep replaces it at every point.
            value = 1.0
        if value is None:
            missing.append(f"--{name}")
        values[name] = value
    if missing:
        raise UsageError(f"missing required arguments: {', '.join(missing)}")
    return Parameters(**values)


def _print_json(payload: Dict[str, Any]) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _cmd_classify(args: argparse.Namespace, config: Dict[str, Any], logger: LogEmitter) -> int:
    p = _parameters(args)
    doc = report(p, float(get_path(config, "analysis.degeneracy_tol", 1e-12)), logger)
    if args.numeric:
        doc["numeric_global_center"] = numeric_global_center_test(p, **oracle_settings(config)).to_dict()
    if args.json:
        _print_json(doc)
        return EXIT_OK
    panel = doc["panel"] if doc["panel"] is not None else f"- ({doc['boundary']})"
    print(f"figure: {doc['figure']}")
    print(f"panel: {panel}  [{doc['conditions']}]")
    for note in doc["notes"]:
        print(f"note: {note}")
    census_doc = doc["census"]
    for e in census_doc["finite"]:
        print(f"finite: {e['label']} at x={e['location'][0]:.6g} {e['kind']}")
    for e in census_doc["infinite"]:
        sectors = e["sectors"]
        extra = f" sectors={sectors['hyperbolic']}h/{sectors['parabolic']}p/{sectors['elliptic']}e" if sectors else ""
        print(f"infinite: {e['label']} {e['chart']} u={e['u']:.6g} {e['kind']}{extra}")
    if census_doc["cycles"] is not None:
        print(f"cycles: {census_doc['cycles']['kind']}")
    print(f"global_center: {str(doc['global_center']).lower()}")
    if args.numeric:
        print(f"numeric_global_center: {str(doc['numeric_global_center']['passed']).lower()}")
    return EXIT_OK


def _cmd_simulate(args: argparse.Namespace, config: Dict[str, Any], logger: LogEmitter) -> int:
    p = _parameters(args)
    overrides: Dict[str, Any] = {"max_time": args.tmax, "backward": bool(args.backward)}
    if args.tol is not None:
        overrides.update(rel_tol=args.tol, abs_tol=args.tol * 1e-2)
    if args.method:
        config["integration"]["method"] = args.method
    opts = IntegrationOptions.from_config(config, **overrides)
    start = PlaneState(args.x0, args.y0)

    if args.disc:
        disc = integrate_on_disc(
            p,
            start,
            opts,
            switch_out=float(get_path(config, "disc.switch_out", 2.0)),
            switch_back=float(get_path(config, "disc.switch_back", 1.5)),
            logger=logger,
        )
        last = disc.final
        print(f"termination={disc.termination.kind} t={last.t:.6g} chart={last.chart} u={last.u:.6g} v={last.v:.6g} "
              f"switches={len(disc.switch_events)}")
        if args.json:
            write_json(disc, args.json)
        return EXIT_OK

    traj = integrate(p, start, opts, logger=logger)
    x, y = traj.final_state.x, traj.final_state.y
    print(f"termination={traj.termination.kind} t={traj.termination.time} samples={len(traj)} final=({x:.17g}, {y:.17g})")
    if args.csv:
        write_csv(traj, args.csv)
    if args.json:
        write_json(traj, args.json)
    return EXIT_OK


def _cmd_portrait(args: argparse.Namespace, config: Dict[str, Any], logger: LogEmitter) -> int:
    p = _parameters(args)
    overrides: Dict[str, Any] = {"orbit_seeds": parse_seeds(args.seeds)}
    if args.radius_px is not None:
        overrides["disc_radius_px"] = args.radius_px
    if args.arrow_density is not None:
        overrides["arrow_density"] = args.arrow_density
    if args.no_circle:
        overrides["draw_infinite_circle"] = False
    spec = RenderSpec.from_config(config, **overrides)
    path = write_svg(render_disc(p, spec, logger, float(get_path(config, "analysis.degeneracy_tol", 1e-12))), args.out)
    print(f"portrait: {path}")
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace, config: Dict[str, Any], logger: LogEmitter) -> int:
    grid, source = load_grid(args.grid)
    workers = args.workers if args.workers is not None else int(get_path(config, "verify.workers", 1))
    if workers < 1:
        raise UsageError("--workers must be >= 1")
    criteria = run_suite(
        args.suite,
        grid,
        workers=workers,
        start_method=str(get_path(config, "verify.start_method", "spawn")),
        logger=logger,
    )
    checks = [GateCheck(**c) for item in criteria for c in item["checks"]]
    summary = summarize(checks)

    output_dir = args.output_dir if args.output_dir is not None else str(get_path(config, "runtime.artifacts.dir", "") or "")
    run_dir = None
    report_path = ""
    if output_dir:
        run_dir = create_run_dir(
            output_dir,
            str(get_path(config, "runtime.run_id", "") or ""),
            int(get_path(config, "runtime.artifacts.retention.max_runs", 10)),
        )
        write_run_metadata(run_dir, config)
        doc = create_report(args.suite, source, criteria, summary, workers=workers)
        report_path = str(write_report(doc, run_dir / "VerifyReport.json"))
        print(f"VerifyReport: {report_path}")

    for item in criteria:
        for check in item["checks"]:
            status = "PASS" if check["passed"] else "FAIL"
            print(f"[{status}] {check['name']}: actual={check['actual']} expected={check['expected']}")
    print(f"Verify verdict: {'PASS' if summary['passed'] else 'FAIL'}")
    logger.emit("info", "main.cli", "verify_finished", {"suite": args.suite, "passed": summary["passed"], "report": report_path})
    if run_dir is not None:
        write_run_log(run_dir, logger.records)
    return EXIT_OK if summary["passed"] else EXIT_VERIFY_FAILED


def _cmd_sweep(args: argparse.Namespace, config: Dict[str, Any], logger: LogEmitter) -> int:
    base = _parameters(args, swept=args.param)
    doc = sweep(base, args.param, args.start, args.stop, args.steps, float(get_path(config, "analysis.degeneracy_tol", 1e-12)))
    if args.json:
        _print_json(doc)
        return EXIT_OK
    for point in doc["points"]:
        print(f"{args.param}={point['value']:.6g} {point['label']}")
    for boundary in doc["boundaries"]:
        lo, hi = boundary["between"]
        print(f"boundary: {boundary['from']} -> {boundary['to']} in [{lo:.6g}, {hi:.6g}]")
    return EXIT_OK


_COMMANDS = {
    "classify": _cmd_classify,
    "simulate": _cmd_simulate,
    "portrait": _cmd_portrait,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
}


if __name__ == "__main__":
    raise SystemExit(main())
