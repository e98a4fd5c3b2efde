"""Navigational intent and goal-directed motion error estimators.

Both estimators are sequential state machines fed one telemetry record at
a time. They share the notion of an *active goal*: the first goal in task
order that has not yet been inspected.
"""

from __future__ import annotations

import math
from collections import deque
from itertools import pairwise
from collections.abc import Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, NamedTuple

from .events import GoalInspected

if TYPE_CHECKING:
    from .telemetry import Goal, TelemetryRecord


@dataclass(frozen=True)
class IntentParams:
    beta: float = 2.0
    eps_mix: float = 0.01
    v_min: float = 0.05

    def __post_init__(self) -> None:
        if not self.beta >= 0:
            raise ValueError(f"intent beta must be >= 0, got {self.beta}")
        if not 0.0 <= self.eps_mix <= 1.0:
            raise ValueError(f"intent eps_mix must lie in [0, 1], got {self.eps_mix}")
        if not self.v_min >= 0:
            raise ValueError(f"intent v_min must be >= 0, got {self.v_min}")

    def to_dict(self) -> dict[str, Any]:
        return {"beta": self.beta, "eps_mix": self.eps_mix, "v_min": self.v_min}


@dataclass(frozen=True)
class MotionErrorParams:
    window_s: float = 2.0
    eps_d: float = 0.01

    def __post_init__(self) -> None:
        if not self.window_s > 0:
            raise ValueError(f"motion window_s must be positive, got {self.window_s}")
        if not self.eps_d > 0:
            raise ValueError(f"motion eps_d must be positive, got {self.eps_d}")

    def to_dict(self) -> dict[str, Any]:
        return {"window_s": self.window_s, "eps_d": self.eps_d}


class GoalTracker:
    """Tracks which goals remain uninspected, in task order."""

    def __init__(self, goals: Sequence[Goal]) -> None:
        self.goals = {g.goal_id: g for g in goals}
        self.remaining = [g.goal_id for g in goals]

    @property
    def active(self) -> Goal | None:
        return self.goals[self.remaining[0]] if self.remaining else None

    def retire(self, goal_id: str) -> bool:
        """Mark a goal inspected. Returns True if the active goal changed."""
        if goal_id not in self.remaining:
            return False
        was_active = self.remaining[0] == goal_id
        self.remaining.remove(goal_id)
        return was_active


def distance_to(goal: Goal, x: float, y: float) -> float:
    """Straight-line distance; swap here for an obstacle-aware metric."""
    return math.hypot(goal.x - x, goal.y - y)


class IntentEstimator:
    """Recursive Bayesian belief over which goal the operator is driving to.

    Each moving sample multiplies the (uniformly smoothed) prior by a
    von Mises style likelihood ``exp(beta * cos(bearing - direction))``.
    The reported intent is the posterior mass on the active goal.
    """

    def __init__(self, goals: Sequence[Goal], params: IntentParams | None = None) -> None:
        self.params = params or IntentParams()
        self.tracker = GoalTracker(goals)
        n = len(self.tracker.remaining)
        self.posterior: dict[str, float] = {gid: 1.0 / n for gid in self.tracker.remaining}

    @property
    def active_goal(self) -> str | None:
        goal = self.tracker.active
        return None if goal is None else goal.goal_id

    @property
    def intent(self) -> float:
        active = self.active_goal
        if active is None:
            return 1.0
        return self.posterior[active]

    def update(self, rec: TelemetryRecord) -> float:
        if abs(rec.v_cmd) >= self.params.v_min and self.posterior:
            self._observe(rec)
        if isinstance(rec.event, GoalInspected):
            self.retire(rec.event.goal_id)
        return self.intent

    def _observe(self, rec: TelemetryRecord) -> None:
        beta, eps = self.params.beta, self.params.eps_mix
        direction = rec.heading if rec.v_cmd >= 0 else rec.heading + math.pi
        uniform = 1.0 / len(self.posterior)
        weights = {}
        for gid, prior in self.posterior.items():
            goal = self.tracker.goals[gid]
            bearing = math.atan2(goal.y - rec.y, goal.x - rec.x)
            mixed = (1.0 - eps) * prior + eps * uniform
            weights[gid] = mixed * math.exp(beta * math.cos(bearing - direction))
        self.posterior = _normalize(weights)

    def retire(self, goal_id: str) -> None:
        self.tracker.retire(goal_id)
        self.posterior.pop(goal_id, None)
        if self.posterior:
            self.posterior = _normalize(self.posterior)


def _normalize(weights: dict[str, float]) -> dict[str, float]:
    total = math.fsum(weights.values())
    if total <= 0.0 or not math.isfinite(total):
        # all mass underflowed; restart from ignorance
        return {gid: 1.0 / len(weights) for gid in weights}
    return {gid: w / total for gid, w in weights.items()}


class _Sample(NamedTuple):
    t: float
    d: float
    speed: float


class MotionErrorEstimator:
    """Shortfall of actual progress toward the active goal over a window.

    Ideal progress is the distance the commanded speed could have covered
    (trapezoidal integral of ``|v_cmd|``); actual progress is the drop in
    straight-line distance to the goal across the window. The error is
    ``clamp(1 - actual/ideal, 0, 1)``; windows with almost no commanded
    motion hold the previous value.
    """

    def __init__(self, goals: Sequence[Goal], params: MotionErrorParams | None = None) -> None:
        self.params = params or MotionErrorParams()
        self.tracker = GoalTracker(goals)
        self.buffer: deque[_Sample] = deque()
        self.last_p = 0.0

    def update(self, rec: TelemetryRecord) -> float:
        goal = self.tracker.active
        if goal is None:
            self.buffer.clear()
            self.last_p = 0.0
        else:
            self.last_p = self._observe(rec, goal)
        if isinstance(rec.event, GoalInspected) and self.tracker.retire(rec.event.goal_id):
            self.buffer.clear()
        return self.last_p

    def _observe(self, rec: TelemetryRecord, goal: Goal) -> float:
        window = self.params.window_s
        buf = self.buffer
        buf.append(_Sample(rec.t, distance_to(goal, rec.x, rec.y), abs(rec.v_cmd)))
        # 1e-9 slack keeps the sample that sits exactly one window back
        while rec.t - buf[0].t > window + 1e-9:
            buf.popleft()
        ideal = 0.0
        for a, b in pairwise(buf):
            ideal += 0.5 * (a.speed + b.speed) * (b.t - a.t)
        if ideal < self.params.eps_d:
            return self.last_p
        actual = buf[0].d - buf[-1].d
        return min(max(1.0 - actual / ideal, 0.0), 1.0)
