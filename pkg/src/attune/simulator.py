"""Seeded desk-scale trial generator.

A synthetic operator drives a unicycle robot through the task's goals in
order. Archetype parameters control how capable the operator is: speed,
steering noise, attention lapses (head turned away from the screen),
wandering detours, careless obstacle encounters and skipped inspections.

All randomness comes from one ``numpy.random.Generator`` seeded per trial.
Draw order:

1. idle prefix duration (uniform);
2. per goal, in task order: detour flag, detour waypoint x and y, skip flag
   (four uniforms);
3. per idle-prefix step: one normal for the head yaw;
4. per teleoperated step: one normal for the baseline head yaw and one
   uniform for lapse onset; when a lapse starts, three uniforms (duration,
   yaw level, drives-while-lapsed flag); while lapsed, one normal for yaw
   jitter; then one normal for the heading wander; then, for each obstacle
   encounter that starts this step (in obstacle order), one uniform for the
   careless flag.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any

import numpy as np

from .events import Collision, Event, GoalInspected
from .telemetry import Goal, Obstacle, Pose, TaskConfig, TelemetryRecord, TrialMeta, Arena

DT = 0.1
STEPS_PER_SECOND = 10
TIME_CAP_S = 600.0

HEADING_GAIN = 2.0
W_MAX = 1.5
WANDER_TAU_S = 2.0
LOOKAHEAD_M = 3.0
CLEARANCE_M = 0.8
PUSHBACK_M = 0.3
WAYPOINT_RADIUS_M = 1.0


class SimulationConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Archetype:
    name: str
    nominal_speed: float
    heading_noise_sigma: float
    lapse_rate: float
    lapse_duration_s: tuple[float, float]
    lapse_yaw_deg: tuple[float, float]
    lapse_drive_prob: float
    detour_prob: float
    collision_prob: float
    inspect_skip_prob: float
    idle_prefix_s: tuple[float, float]

    def __post_init__(self) -> None:
        for name in ("lapse_drive_prob", "detour_prob", "collision_prob", "inspect_skip_prob"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise SimulationConfigError(f"{self.name}: {name} must lie in [0, 1], got {value}")
        if not self.nominal_speed > 0:
            raise SimulationConfigError(f"{self.name}: nominal_speed must be positive")
        if self.heading_noise_sigma < 0 or self.lapse_rate < 0:
            raise SimulationConfigError(f"{self.name}: noise and lapse rate must be >= 0")
        for name in ("lapse_duration_s", "lapse_yaw_deg", "idle_prefix_s"):
            lo, hi = getattr(self, name)
            if not 0 <= lo <= hi:
                raise SimulationConfigError(f"{self.name}: {name} must be a range 0 <= lo <= hi")
            object.__setattr__(self, name, (float(lo), float(hi)))

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Archetype:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise SimulationConfigError(f"unknown archetype fields: {sorted(unknown)}")
        try:
            return cls(**{k: tuple(v) if isinstance(v, list) else v for k, v in data.items()})
        except TypeError as exc:
            missing = sorted(known - set(data))
            raise SimulationConfigError(
                f"archetype {data.get('name')!r}: missing fields {missing}") from exc


ARCHETYPES: dict[str, Archetype] = {
    a.name: a
    for a in (
        Archetype("AboveAverage", nominal_speed=1.0, heading_noise_sigma=0.05,
                  lapse_rate=0.5, lapse_duration_s=(1.0, 2.0), lapse_yaw_deg=(30.0, 60.0),
                  lapse_drive_prob=0.0, detour_prob=0.0, collision_prob=0.0,
                  inspect_skip_prob=0.0, idle_prefix_s=(0.0, 3.0)),
        Archetype("Average", nominal_speed=0.8, heading_noise_sigma=0.15,
                  lapse_rate=2.0, lapse_duration_s=(1.0, 3.0), lapse_yaw_deg=(30.0, 60.0),
                  lapse_drive_prob=0.3, detour_prob=0.2, collision_prob=0.15,
                  inspect_skip_prob=0.05, idle_prefix_s=(0.0, 10.0)),
        Archetype("BelowAverage", nominal_speed=0.7, heading_noise_sigma=0.3,
                  lapse_rate=4.0, lapse_duration_s=(2.0, 5.0), lapse_yaw_deg=(30.0, 60.0),
                  lapse_drive_prob=0.7, detour_prob=0.4, collision_prob=0.5,
                  inspect_skip_prob=0.15, idle_prefix_s=(5.0, 30.0)),
    )
}


def load_archetypes(path: str | os.PathLike[str]) -> dict[str, Archetype]:
    """Read archetypes from JSON (``{name: {field: value}}``) over the defaults.

    An entry may give only some fields when it extends an existing
    archetype: either one of the same name, or the one named by its
    ``"base"`` key.
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SimulationConfigError(f"{path}: not valid JSON ({exc})") from exc
    out = dict(ARCHETYPES)
    for name, entry in data.items():
        entry = dict(entry)
        parent = entry.pop("base", name)
        if parent not in out and parent != name:
            raise SimulationConfigError(f"archetype {name!r}: unknown base {parent!r}")
        base = out[parent].to_dict() if parent in out else {}
        out[name] = Archetype.from_dict({**base, **entry, "name": name})
    return out


def default_task() -> TaskConfig:
    """20 x 20 m arena, four goals, three obstacles sitting on the goal legs."""
    return TaskConfig(
        arena=Arena(0.0, 0.0, 20.0, 20.0),
        goals=(
            Goal("g1", 16.0, 4.0, inspect_radius=1.0, dwell_s=2.0),
            Goal("g2", 16.0, 16.0, inspect_radius=1.0, dwell_s=2.0),
            Goal("g3", 4.0, 16.0, inspect_radius=1.0, dwell_s=2.0),
            Goal("g4", 10.0, 10.0, inspect_radius=1.0, dwell_s=2.0),
        ),
        obstacles=(
            Obstacle(9.0, 3.0, 1.2),
            Obstacle(16.0, 10.0, 1.2),
            Obstacle(10.0, 16.0, 1.2),
        ),
        start=Pose(2.0, 2.0, 0.0),
    )


def check_task(task: TaskConfig) -> None:
    """Reject layouts the simulated operator cannot complete."""
    for g in task.goals:
        for o in task.obstacles:
            if math.hypot(g.x - o.x, g.y - o.y) <= o.radius:
                raise SimulationConfigError(f"goal {g.goal_id!r} lies inside an obstacle")
    s = task.start_pose
    for o in task.obstacles:
        if math.hypot(s.x - o.x, s.y - o.y) <= o.radius:
            raise SimulationConfigError("start pose lies inside an obstacle")


def wrap_angle(a: float) -> float:
    """Wrap to (-pi, pi]."""
    a = math.remainder(a, 2.0 * math.pi)
    return math.pi if a <= -math.pi else a


def _segment_blocked(px: float, py: float, tx: float, ty: float, o: Obstacle, radius: float) -> bool:
    dx, dy = tx - px, ty - py
    seg2 = dx * dx + dy * dy
    if seg2 == 0.0:
        return False
    u = ((o.x - px) * dx + (o.y - py) * dy) / seg2
    if u <= 0.0:
        return False
    u = min(u, 1.0)
    return math.hypot(px + u * dx - o.x, py + u * dy - o.y) < radius


@dataclass
class _Lapse:
    until: float
    yaw: float
    drives: bool


class _Operator:
    """Mutable per-trial simulation state."""

    def __init__(self, task: TaskConfig, arch: Archetype, rng: np.random.Generator) -> None:
        self.task, self.arch, self.rng = task, arch, rng
        start = task.start_pose
        self.x, self.y, self.heading = start.x, start.y, wrap_angle(start.heading)
        lo, hi = arch.idle_prefix_s
        self.idle_steps = round((lo + (hi - lo) * rng.random()) * STEPS_PER_SECOND)

        a = task.arena
        self.plan: list[tuple[bool, tuple[float, float] | None]] = []
        for _ in task.goals:
            detour = rng.random() < arch.detour_prob
            wx = a.xmin + 2.0 + (a.xmax - a.xmin - 4.0) * rng.random()
            wy = a.ymin + 2.0 + (a.ymax - a.ymin - 4.0) * rng.random()
            skip = rng.random() < arch.inspect_skip_prob
            self.plan.append((skip, self._clear_of_obstacles(wx, wy) if detour else None))

        self.goal_index = 0
        self.waypoint = self.plan[0][1] if self.plan else None
        self.dwell_start: float | None = None
        self.wander = 0.0
        self.lapse: _Lapse | None = None
        self.encounter: dict[int, tuple[bool, int]] = {}  # obstacle -> (careless, side)
        self.touching: set[int] = set()

    def _clear_of_obstacles(self, wx: float, wy: float) -> tuple[float, float]:
        for o in self.task.obstacles:
            d = math.hypot(wx - o.x, wy - o.y)
            if d < o.radius + 1.0:
                ux, uy = ((wx - o.x) / d, (wy - o.y) / d) if d > 0 else (1.0, 0.0)
                wx, wy = o.x + ux * (o.radius + 1.5), o.y + uy * (o.radius + 1.5)
        return self.task.arena.clamp(wx, wy)

    @property
    def done(self) -> bool:
        return self.goal_index >= len(self.task.goals)

    @property
    def goal(self) -> Goal:
        return self.task.goals[self.goal_index]

    def _advance_goal(self) -> None:
        self.goal_index += 1
        self.dwell_start = None
        self.waypoint = None if self.done else self.plan[self.goal_index][1]

    def target(self) -> tuple[float, float]:
        if self.waypoint is not None:
            return self.waypoint
        return self.goal.x, self.goal.y

    # -- per-step pieces -----------------------------------------------------

    def contact(self) -> int | None:
        hit = None
        now = set()
        for j, o in enumerate(self.task.obstacles):
            if math.hypot(self.x - o.x, self.y - o.y) <= o.radius:
                now.add(j)
                if j not in self.touching and hit is None:
                    hit = j
        self.touching = now
        return hit

    def goal_progress(self, t: float, collided: bool) -> Event:
        """Handle arrival, skipping and dwell for the current goal."""
        while not self.done:
            if self.waypoint is not None:
                if math.hypot(self.x - self.waypoint[0], self.y - self.waypoint[1]) <= WAYPOINT_RADIUS_M:
                    self.waypoint = None
                else:
                    return None
            g = self.goal
            if math.hypot(self.x - g.x, self.y - g.y) > g.inspect_radius:
                self.dwell_start = None
                return None
            if self.plan[self.goal_index][0]:
                self._advance_goal()
                continue
            if self.dwell_start is None:
                self.dwell_start = t
            if t - self.dwell_start >= g.dwell_s and not collided:
                event = GoalInspected(g.goal_id)
                self._advance_goal()
                return event
            return None
        return None

    def head_yaw(self, t: float) -> float:
        base = abs(3.0 + 2.0 * self.rng.standard_normal())
        onset = self.rng.random()
        if self.lapse is not None and t >= self.lapse.until:
            self.lapse = None
        if self.lapse is None and onset < self.arch.lapse_rate / 60.0 * DT:
            lo, hi = self.arch.lapse_duration_s
            ylo, yhi = self.arch.lapse_yaw_deg
            until = t + lo + (hi - lo) * self.rng.random()
            yaw = ylo + (yhi - ylo) * self.rng.random()
            drives = self.rng.random() < self.arch.lapse_drive_prob
            self.lapse = _Lapse(until, yaw, drives)
        if self.lapse is not None:
            jitter = self.rng.standard_normal()
            return min(max(self.lapse.yaw + jitter, 0.0), 180.0)
        return min(base, 9.5)

    def steer(self, last_v: float) -> tuple[float, float]:
        arch = self.arch
        self.wander += (-self.wander * DT / WANDER_TAU_S
                        + arch.heading_noise_sigma * math.sqrt(2.0 * DT / WANDER_TAU_S)
                        * self.rng.standard_normal())
        dwelling = self.dwell_start is not None
        if self.lapse is not None:
            if self.lapse.drives and not dwelling:
                return last_v, 0.0
            return 0.0, 0.0
        if dwelling:
            return 0.0, 0.0

        tx, ty = self.target()
        desired = math.atan2(ty - self.y, tx - self.x)
        desired = self._avoid(tx, ty, desired)
        err = wrap_angle(desired + self.wander - self.heading)
        w = min(max(HEADING_GAIN * err, -W_MAX), W_MAX)
        v = arch.nominal_speed * min(max(math.cos(err), 0.2), 1.0)
        dist = math.hypot(tx - self.x, ty - self.y)
        if dist < 2.0:
            v *= max(0.3, dist / 2.0)
        return v, w

    def _avoid(self, tx: float, ty: float, desired: float) -> float:
        best = None
        for j, o in enumerate(self.task.obstacles):
            dc = math.hypot(self.x - o.x, self.y - o.y)
            if dc > o.radius + LOOKAHEAD_M + 1.0:
                self.encounter.pop(j, None)
                continue
            inflated = o.radius + CLEARANCE_M
            blocked = _segment_blocked(self.x, self.y, tx, ty, o, inflated)
            if j not in self.encounter:
                if not (blocked and dc < o.radius + LOOKAHEAD_M):
                    continue
                careless = self.rng.random() < self.arch.collision_prob
                phi = math.atan2(o.y - self.y, o.x - self.x)
                side = 1 if wrap_angle(desired - phi) >= 0 else -1
                self.encounter[j] = (careless, side)
            careless, side = self.encounter[j]
            if careless or not blocked:
                continue
            if best is None or dc < best[0]:
                best = (dc, o, inflated, side)
        if best is None:
            return desired
        dc, o, inflated, side = best
        phi = math.atan2(o.y - self.y, o.x - self.x)
        if dc > inflated:
            return phi + side * (math.asin(inflated / dc) + 0.15)
        return phi + side * (math.pi / 2 + 0.2)

    def move(self, v: float, w: float, collided_with: int | None) -> None:
        if collided_with is not None:
            o = self.task.obstacles[collided_with]
            d = math.hypot(self.x - o.x, self.y - o.y)
            ux, uy = ((self.x - o.x) / d, (self.y - o.y) / d) if d > 0 else (-math.cos(self.heading), -math.sin(self.heading))
            self.x, self.y = self.task.arena.clamp(o.x + ux * (o.radius + PUSHBACK_M),
                                                   o.y + uy * (o.radius + PUSHBACK_M))
            # the operator now steers around this obstacle
            self.encounter[collided_with] = (False, self.encounter.get(collided_with, (False, 1))[1])
            return
        x = self.x + v * math.cos(self.heading) * DT
        y = self.y + v * math.sin(self.heading) * DT
        self.x, self.y = self.task.arena.clamp(x, y)
        self.heading = wrap_angle(self.heading + w * DT)


def generate_trial(task: TaskConfig, archetype: Archetype, seed: int,
                   operator_id: str | None = None, trial_id: str | None = None,
                   time_cap_s: float = TIME_CAP_S) -> tuple[TrialMeta, list[TelemetryRecord]]:
    """Simulate one trial; identical inputs give identical records."""
    check_task(task)
    rng = np.random.default_rng(seed)
    op = _Operator(task, archetype, rng)
    meta = TrialMeta(
        operator_id=operator_id or f"{archetype.name}-{seed}",
        trial_id=trial_id or f"seed{seed}",
        seed=seed,
        archetype=archetype.name,
    )
    records: list[TelemetryRecord] = []
    cap_steps = round(time_cap_s * STEPS_PER_SECOND)

    for k in range(op.idle_steps):
        records.append(TelemetryRecord(k / STEPS_PER_SECOND, op.x, op.y, op.heading,
                                       0.0, 0.0, min(abs(3.0 + 2.0 * rng.standard_normal()), 9.5),
                                       False, None))
    v = 0.0
    k = op.idle_steps
    while not op.done and k <= cap_steps:
        t = k / STEPS_PER_SECOND
        hit = op.contact()
        event: Event = Collision() if hit is not None else None
        goal_event = op.goal_progress(t, collided=hit is not None)
        if goal_event is not None:
            event = goal_event
        yaw = op.head_yaw(t)
        v, w = op.steer(v) if not op.done else (0.0, 0.0)
        records.append(TelemetryRecord(t, op.x, op.y, op.heading, v, w, yaw, True, event))
        op.move(v, w, hit)
        k += 1
    return meta, records


# -- cohorts ---------------------------------------------------------------------------

FIXTURE_SEEDS: dict[str, tuple[int, int]] = {
    "AboveAverage": (101, 102),
    "Average": (201, 202),
    "BelowAverage": (301, 302),
}


def cohort_seed_sets(n_sets: int, master_seed: int = 2024) -> list[dict[str, tuple[int, int]]]:
    """Draw ``n_sets`` independent six-operator seed assignments."""
    rng = np.random.default_rng(master_seed)
    out = []
    for _ in range(n_sets):
        seeds = rng.choice(1_000_000, size=6, replace=False).tolist()
        out.append({
            "AboveAverage": (seeds[0], seeds[1]),
            "Average": (seeds[2], seeds[3]),
            "BelowAverage": (seeds[4], seeds[5]),
        })
    return out


def generate_cohort(task: TaskConfig, seeds: dict[str, tuple[int, ...]] | None = None,
                    archetypes: dict[str, Archetype] | None = None,
                    ) -> list[tuple[TrialMeta, list[TelemetryRecord]]]:
    """One trial per (archetype, seed); operators are numbered op01, op02, ..."""
    seeds = FIXTURE_SEEDS if seeds is None else seeds
    archetypes = archetypes or ARCHETYPES
    trials = []
    n = 0
    for name, arch_seeds in seeds.items():
        for seed in arch_seeds:
            n += 1
            trials.append(generate_trial(task, archetypes[name], seed,
                                         operator_id=f"op{n:02d}", trial_id=f"t{seed}"))
    return trials


