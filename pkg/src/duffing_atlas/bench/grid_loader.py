"""Acceptance-grid loading for `verify`.

configs/verify_grid.yaml is the only source of grid values. `default` loads it
as is; any other value is a YAML path merged over it.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Dict, Tuple, Union

import yaml

from duffing_atlas.core.config import _merge_dicts


DEFAULT_GRID_NAME = "default"


def default_grid_path() -> Path:
    return Path(__file__).resolve().parents[3] / "configs" / "verify_grid.yaml"


def _read_grid(path: Path) -> Dict[str, Any]:
    if not path.exists():
        raise FileNotFoundError(f"grid file not found: {path}")
    with path.open("r", encoding="utf-8") as handle:
        doc = yaml.safe_load(handle) or {}
    if not isinstance(doc, dict):
        raise ValueError(f"grid file must hold a mapping: {path}")
    return doc


def builtin_grid() -> Dict[str, Any]:
    """The shipped grid, freshly parsed so callers may mutate it."""
    return _read_grid(default_grid_path())


def load_grid(source: Union[str, Path, None] = DEFAULT_GRID_NAME) -> Tuple[Dict[str, Any], str]:
    """Return (grid, resolved source) for a grid name or YAML path."""
    if source is None or str(source) == DEFAULT_GRID_NAME:
        path = default_grid_path()
        return _read_grid(path), str(path.resolve())
    path = Path(source).expanduser()
    overlay = _read_grid(path)
    return _merge_dicts(builtin_grid(), overlay), str(path.resolve())
