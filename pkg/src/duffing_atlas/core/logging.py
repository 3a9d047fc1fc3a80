"""
ROLE: Structured JSON-line logging to stderr and an optional JSONL file.

CONFIG KEYS:
  - logging.level: minimum level printed to the stream
  - logging.file: optional JSONL path; every record at or above level is appended

FAILURE MODES:
  - log file write failure -> record still printed to the stream

LOG EVENTS:
  - emitted by callers; record layout is
    {t_ns, level, message, context: {run_id, module, event, details}}

TESTS:
  - tests/test_core_config_logging.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO

from duffing_atlas.core.clock import now_ns


LEVELS = {"debug": 10, "info": 20, "warning": 30, "error": 40}


class LogEmitter:
    """Emit structured log records; stdout is left to command output."""

    def __init__(
        self,
        min_level: str = "info",
        run_id: Optional[str] = None,
        stream: Optional[TextIO] = None,
        path: Optional[str] = None,
    ) -> None:
        self._min_level = LEVELS.get(min_level, 20)
        self._run_id = run_id
        self._stream = stream
        self._path = Path(path) if path else None
        self.records: List[Dict[str, Any]] = []

    def emit(self, level: str, module: str, event: str, payload: Optional[Dict[str, Any]] = None) -> None:
        if LEVELS.get(level, 0) < self._min_level:
            return
        record = {
            "t_ns": now_ns(),
            "level": level,
            "message": event,
            "context": {
                "run_id": self._run_id,
                "module": module,
                "event": event,
                "details": payload or {},
            },
        }
        self.records.append(record)
        line = json.dumps(record, sort_keys=True, default=str)
        stream = self._stream if self._stream is not None else sys.stderr
        print(line, file=stream)
        if self._path is not None:
            try:
                self._path.parent.mkdir(parents=True, exist_ok=True)
                with self._path.open("a", encoding="utf-8") as handle:
                    handle.write(line + "\n")
            except OSError:
                self._path = None

    def events(self, name: str) -> List[Dict[str, Any]]:
        return [r for r in self.records if r["context"]["event"] == name]


def emitter_from_config(config: Dict[str, Any], run_id: Optional[str] = None) -> LogEmitter:
    logging_cfg = config.get("logging", {}) if isinstance(config, dict) else {}
    if not isinstance(logging_cfg, dict):
        logging_cfg = {}
    return LogEmitter(
        min_level=str(logging_cfg.get("level", "info") or "info"),
        run_id=run_id,
        path=str(logging_cfg.get("file", "") or "") or None,
    )
