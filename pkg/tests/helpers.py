"""Record builders shared by the tests."""

from __future__ import annotations

import math

from attune.simulator import default_task, generate_cohort
from attune.telemetry import TelemetryRecord, write_trial


def rec(t, x=0.0, y=0.0, heading=0.0, v=0.0, w=0.0, ha=0.0, teleop=True, event=None):
    return TelemetryRecord(t, x, y, heading, v, w, ha, teleop, event)


def straight_run(start, goal_xy, speed, dt, n, t0=0.0):
    """Records driving from ``start`` straight at ``goal_xy`` at constant speed."""
    sx, sy = start
    gx, gy = goal_xy
    heading = math.atan2(gy - sy, gx - sx)
    ux, uy = math.cos(heading), math.sin(heading)
    return [rec(t0 + k * dt, sx + ux * speed * k * dt, sy + uy * speed * k * dt, heading, speed)
            for k in range(n)]


def write_cohort(directory):
    """Write the six fixture trials into ``directory``; return the paths."""
    directory.mkdir(parents=True, exist_ok=True)
    task = default_task()
    paths = []
    for meta, records in generate_cohort(task):
        paths.append(write_trial(meta, task, records, directory / f"{meta.operator_id}.trial"))
    return paths
