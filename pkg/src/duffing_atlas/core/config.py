"""
ROLE: Load YAML config, validate, and expose dotted-path accessors.

CONFIG KEYS:
  - runtime.enable_validation: validate the merged config on load (bool)
  - analysis.*, integration.*, oracle.*, disc.*, render.*, verify.*, logging.*

FAILURE MODES:
  - invalid key or value -> ValueError listing every problem -> log config_validation_failed

LOG EVENTS:
  - module=core.config, event=config_validation_failed, payload keys=path, errors

TESTS:
  - tests/test_core_config_logging.py
"""

from __future__ import annotations

import copy
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml


INTEGRATION_METHODS = ("adaptive_rk", "symplectic_leapfrog")
START_METHODS = ("spawn", "fork", "forkserver")
LOG_LEVELS = ("debug", "info", "warning", "error")


def load_config(path: Optional[str] = None, logger: Optional[Any] = None) -> Dict[str, Any]:
    """Load YAML config and apply defaults. No path means defaults only."""
    data: Dict[str, Any] = {}
    if path:
        with open(path, "r", encoding="utf-8") as handle:
            loaded = yaml.safe_load(handle) or {}
        if isinstance(loaded, dict):
            data = loaded
    merged = _merge_dicts(_default_config(), data)
    runtime_cfg = merged.setdefault("runtime", {})
    if path:
        runtime_cfg["config_path"] = str(Path(path).resolve())
    if bool(get_path(merged, "runtime.enable_validation", True)):
        errors = validate_config(merged)
        if errors:
            if logger is not None:
                logger.emit("error", "core.config", "config_validation_failed", {"path": path, "errors": errors})
            joined = "\n".join(f"- {e}" for e in errors)
            raise ValueError(f"Config validation failed for {path or '<defaults>'}:\n{joined}")
    return merged


def get_path(config: Dict[str, Any], dotted_path: str, default: Any = None) -> Any:
    """Get a nested config value by dotted path."""
    node: Any = config
    for key in dotted_path.split("."):
        if not isinstance(node, dict) or key not in node:
            return default
        node = node[key]
    return node


def default_config_path() -> Path:
    return Path(__file__).resolve().parents[3] / "configs" / "default.yaml"


def _default_config() -> Dict[str, Any]:
    return {
        "runtime": {
            "run_id": "",
            "enable_validation": True,
            "artifacts": {
                "dir": "",
                "retention": {
                    "max_runs": 10,
                },
            },
        },
        "analysis": {
            "degeneracy_tol": 1e-12,
        },
        "integration": {
            "method": "adaptive_rk",
            "rel_tol": 1e-10,
            "abs_tol": 1e-12,
            "max_step": 0.5,
            "escape_radius": 1e6,
            "max_time": 1e4,
        },
        "oracle": {
            "close_tol": 1e-6,
            "max_return_time": 1e3,
            "global_radii": [0.1, 1.0, 5.0, 20.0, 100.0],
        },
        "disc": {
            "switch_out": 2.0,
            "switch_back": 1.5,
        },
        "render": {
            "disc_radius_px": 320,
            "arrow_density": 0.02,
            "orbit_time": 30.0,
            "escape_radius": 1e3,
            "draw_infinite_circle": True,
        },
        "verify": {
            "workers": 1,
            "start_method": "spawn",
        },
        "logging": {
            "level": "info",
            "file": "",
        },
    }


def _merge_dicts(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    result = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(result.get(key), dict):
            result[key] = _merge_dicts(result[key], value)
        else:
            result[key] = copy.deepcopy(value)
    return result


def validate_config(config: Dict[str, Any]) -> List[str]:
    errors: List[str] = []

    def _positive(dotted: str) -> None:
        value = get_path(config, dotted)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            errors.append(f"{dotted} must be numeric")
        elif value <= 0:
            errors.append(f"{dotted} must be > 0")

    for key in (
        "analysis.degeneracy_tol",
        "integration.rel_tol",
        "integration.abs_tol",
        "integration.max_step",
        "integration.escape_radius",
        "integration.max_time",
        "oracle.close_tol",
        "oracle.max_return_time",
        "render.orbit_time",
        "render.escape_radius",
    ):
        _positive(key)

    density = get_path(config, "render.arrow_density")
    if isinstance(density, bool) or not isinstance(density, (int, float)) or density < 0:
        errors.append("render.arrow_density must be >= 0")

    method = get_path(config, "integration.method")
    if method not in INTEGRATION_METHODS:
        errors.append(f"integration.method must be one of: {', '.join(INTEGRATION_METHODS)}")

    radii = get_path(config, "oracle.global_radii")
    if not isinstance(radii, list) or not radii:
        errors.append("oracle.global_radii must be a non-empty list")
    else:
        for idx, radius in enumerate(radii):
            if isinstance(radius, bool) or not isinstance(radius, (int, float)) or radius <= 0:
                errors.append(f"oracle.global_radii[{idx}] must be > 0")

    switch_out = get_path(config, "disc.switch_out")
    switch_back = get_path(config, "disc.switch_back")
    if not isinstance(switch_out, (int, float)) or not isinstance(switch_back, (int, float)):
        errors.append("disc.switch_out and disc.switch_back must be numeric")
    elif not 1.0 < switch_back < switch_out:
        errors.append("disc.switch_back must satisfy 1 < switch_back < switch_out")

    radius_px = get_path(config, "render.disc_radius_px")
    if isinstance(radius_px, bool) or not isinstance(radius_px, int) or radius_px <= 0:
        errors.append("render.disc_radius_px must be a positive integer")

    workers = get_path(config, "verify.workers")
    if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
        errors.append("verify.workers must be an integer >= 1")
    if get_path(config, "verify.start_method") not in START_METHODS:
        errors.append(f"verify.start_method must be one of: {', '.join(START_METHODS)}")

    if get_path(config, "logging.level") not in LOG_LEVELS:
        errors.append(f"logging.level must be one of: {', '.join(LOG_LEVELS)}")
    return errors
