"""Pass/fail scoring helpers for the verification suites."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, Iterable, Optional


@dataclass(frozen=True)
class GateCheck:
    name: str
    passed: bool
    expected: str
    actual: str

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "expected": self.expected, "actual": self.actual}


def check_max(name: str, actual: Optional[float], maximum: float, unit: str = "") -> GateCheck:
    expected = f"<= {maximum:.3e}{(' ' + unit) if unit else ''}"
    if actual is None:
        return GateCheck(name=name, passed=False, expected=expected, actual="missing")
    passed = bool(actual <= maximum)
    return GateCheck(name=name, passed=passed, expected=expected, actual=f"{actual:.3e}{(' ' + unit) if unit else ''}")


def check_count(name: str, agree: int, total: int) -> GateCheck:
    """All `total` cases must agree; an empty grid fails."""
    passed = total > 0 and agree == total
    return GateCheck(name=name, passed=passed, expected=f"{total}/{total} agree", actual=f"{agree}/{total} agree")


def check_equal(name: str, actual: Any, expected: Any) -> GateCheck:
    return GateCheck(name=name, passed=bool(actual == expected), expected=str(expected), actual=str(actual))


def summarize(checks: Iterable[GateCheck]) -> Dict[str, Any]:
    items = list(checks)
    failed = [item.name for item in items if not item.passed]
    return {
        "passed": bool(items) and not failed,
        "total": len(items),
        "failed": failed,
    }
