"""Trajectory export: CSV with header t,x,y and JSON (plane and disc runs), 17 significant digits."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, Union

from duffing_atlas.dynamics.disc import DiscTrajectory, disc_point
from duffing_atlas.dynamics.integrator import Trajectory


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def trajectory_to_csv(traj: Trajectory) -> str:
    lines = ["t,x,y"]
    for t, z in zip(traj.times, traj.states):
        lines.append(f"{_fmt(t)},{_fmt(z[0])},{_fmt(z[1])}")
    return "\n".join(lines) + "\n"


def write_csv(traj: Trajectory, path: Union[str, Path]) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(trajectory_to_csv(traj), encoding="utf-8")
    return out


def trajectory_to_dict(traj: Trajectory) -> Dict[str, Any]:
    return {
        "termination": traj.termination.to_dict(),
        "samples": [[float(t), float(z[0]), float(z[1])] for t, z in zip(traj.times, traj.states)],
        "crossings": [
            {"t": c.t, "x": c.state.x, "direction": c.direction} for c in traj.crossings
        ],
    }


def write_json(traj: Union[Trajectory, DiscTrajectory], path: Union[str, Path]) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    payload = disc_trajectory_to_dict(traj) if isinstance(traj, DiscTrajectory) else trajectory_to_dict(traj)
    with out.open("w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
    return out


def disc_trajectory_to_dict(traj: DiscTrajectory) -> Dict[str, Any]:
    return {
        "termination": traj.termination.to_dict(),
        "samples": [
            {"t": s.t, "chart": s.chart, "u": s.u, "v": s.v, "sphere": list(disc_point(s))} for s in traj.samples
        ],
        "switches": [
            {"t": e.t, "source": e.source, "target": e.target, "before": list(e.before), "after": list(e.after)}
            for e in traj.switch_events
        ],
    }
