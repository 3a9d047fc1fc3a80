"""Verify report schema helpers."""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from duffing_atlas.version import __version__


SCHEMA_VERSION = "duffing-atlas/1"


def create_report(
    suite: str,
    grid_source: str,
    criteria: List[Dict[str, Any]],
    summary: Dict[str, Any],
    workers: int = 1,
) -> Dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "package_version": __version__,
        "generated_at_utc": datetime.now(timezone.utc).isoformat(),
        "inputs": {
            "suite": suite,
            "grid": grid_source,
            "grid_sha256": _sha256_file(grid_source),
            "workers": int(workers),
        },
        "summary": summary,
        "criteria": criteria,
    }


def write_report(report: Dict[str, Any], output_path: Union[str, Path]) -> Path:
    path = Path(output_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as handle:
        json.dump(report, handle, indent=2, sort_keys=True)
    return path


def _sha256_file(path: Union[str, Path]) -> Optional[str]:
    p = Path(path)
    if not p.is_file():
        return None
    h = hashlib.sha256()
    with p.open("rb") as handle:
        for chunk in iter(lambda: handle.read(1024 * 1024), b""):
            h.update(chunk)
    return h.hexdigest()
