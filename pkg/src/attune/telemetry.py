"""Trial data model, the on-disk trial format, and record replay.

A trial file is UTF-8 text with LF line endings. Line 1 is a JSON object
with keys ``meta`` and ``task``. Every following line is one record::

    t,x,y,heading,v_cmd,w_cmd,head_yaw_deg,teleop_active,event

``teleop_active`` is ``1`` or ``0``; ``event`` is ``-``, ``C`` (collision)
or ``G:<goal_id>`` (goal inspected). Floats are written in shortest
round-trip form, so reading a written file reproduces it exactly.
"""

from __future__ import annotations

import json
import math
import os
import time
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Union

from .events import Event, GoalInspected, format_event, parse_event
from .params import ModelParams

RECORD_FIELDS = (
    "t", "x", "y", "heading", "v_cmd", "w_cmd", "head_yaw_deg", "teleop_active", "event",
)


class TrialFormatError(ValueError):
    """A trial file or record violates the format or its invariants."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None) -> None:
        self.line = line
        self.field = field
        prefix = f"line {line}: " if line is not None else ""
        suffix = f" (field {field!r})" if field is not None else ""
        super().__init__(f"{prefix}{message}{suffix}")


class TaskConfigError(ValueError):
    """Task configuration violates its invariants."""


@dataclass(frozen=True)
class TelemetryRecord:
    t: float
    x: float
    y: float
    heading: float
    v_cmd: float
    w_cmd: float
    head_yaw_deg: float
    teleop_active: bool
    event: Event = None


@dataclass(frozen=True)
class Arena:
    xmin: float = 0.0
    ymin: float = 0.0
    xmax: float = 20.0
    ymax: float = 20.0

    def contains(self, x: float, y: float) -> bool:
        return self.xmin <= x <= self.xmax and self.ymin <= y <= self.ymax

    def clamp(self, x: float, y: float) -> tuple[float, float]:
        return min(max(x, self.xmin), self.xmax), min(max(y, self.ymin), self.ymax)


@dataclass(frozen=True)
class Goal:
    goal_id: str
    x: float
    y: float
    inspect_radius: float = 1.0
    dwell_s: float = 2.0


@dataclass(frozen=True)
class Obstacle:
    x: float
    y: float
    radius: float


@dataclass(frozen=True)
class Pose:
    x: float
    y: float
    heading: float = 0.0


@dataclass(frozen=True)
class TaskConfig:
    arena: Arena = field(default_factory=Arena)
    goals: tuple[Goal, ...] = ()
    obstacles: tuple[Obstacle, ...] = ()
    params: ModelParams = field(default_factory=ModelParams)
    start: Pose | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "goals", tuple(self.goals))
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        self.validate()

    @property
    def start_pose(self) -> Pose:
        if self.start is not None:
            return self.start
        return Pose(self.arena.xmin + 1.0, self.arena.ymin + 1.0, 0.0)

    def goal_ids(self) -> list[str]:
        return [g.goal_id for g in self.goals]

    def validate(self) -> None:
        a = self.arena
        if not (a.xmin < a.xmax and a.ymin < a.ymax):
            raise TaskConfigError(f"arena bounds are empty: {a}")
        seen: set[str] = set()
        for g in self.goals:
            if not g.goal_id or "," in g.goal_id or "\n" in g.goal_id:
                raise TaskConfigError(f"goal_id {g.goal_id!r} must be nonempty without commas/newlines")
            if g.goal_id in seen:
                raise TaskConfigError(f"duplicate goal_id {g.goal_id!r}")
            seen.add(g.goal_id)
            if not a.contains(g.x, g.y):
                raise TaskConfigError(f"goal {g.goal_id!r} lies outside the arena")
            if not g.inspect_radius > 0:
                raise TaskConfigError(f"goal {g.goal_id!r}: inspect_radius must be > 0")
            if not g.dwell_s >= 0:
                raise TaskConfigError(f"goal {g.goal_id!r}: dwell_s must be >= 0")
        for k, o in enumerate(self.obstacles):
            if not a.contains(o.x, o.y):
                raise TaskConfigError(f"obstacle {k} lies outside the arena")
            if not o.radius > 0:
                raise TaskConfigError(f"obstacle {k}: radius must be > 0")
        if self.start is not None and not a.contains(self.start.x, self.start.y):
            raise TaskConfigError("start pose lies outside the arena")

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "arena": vars(self.arena).copy(),
            "goals": [vars(g).copy() for g in self.goals],
            "obstacles": [vars(o).copy() for o in self.obstacles],
            "params": self.params.to_dict(),
        }
        if self.start is not None:
            out["start"] = vars(self.start).copy()
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> TaskConfig:
        try:
            return cls(
                arena=Arena(**_floats(data.get("arena", {}))),
                goals=tuple(
                    Goal(str(g["goal_id"]), **_floats({k: v for k, v in g.items() if k != "goal_id"}))
                    for g in data.get("goals", [])
                ),
                obstacles=tuple(Obstacle(**_floats(o)) for o in data.get("obstacles", [])),
                params=ModelParams.from_dict(data.get("params", {})),
                start=Pose(**_floats(data["start"])) if data.get("start") is not None else None,
            )
        except TaskConfigError:
            raise
        except (TypeError, ValueError, KeyError) as exc:
            raise TaskConfigError(f"malformed task config: {exc}") from exc


def _floats(d: dict[str, Any]) -> dict[str, float]:
    return {k: float(v) for k, v in d.items()}


def load_task(path: str | os.PathLike[str]) -> TaskConfig:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise TaskConfigError(f"{path}: not valid JSON ({exc})") from exc
    return TaskConfig.from_dict(data)


def save_task(task: TaskConfig, path: str | os.PathLike[str]) -> Path:
    path = Path(path)
    path.write_text(json.dumps(task.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


@dataclass(frozen=True)
class TrialMeta:
    operator_id: str
    trial_id: str
    seed: int | None = None
    archetype: str | None = None

    def __post_init__(self) -> None:
        if not self.operator_id:
            raise ValueError("operator_id must be nonempty")

    def to_dict(self) -> dict[str, Any]:
        return {
            "operator_id": self.operator_id,
            "trial_id": self.trial_id,
            "seed": self.seed,
            "archetype": self.archetype,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> TrialMeta:
        seed = data.get("seed")
        return cls(
            operator_id=str(data["operator_id"]),
            trial_id=str(data["trial_id"]),
            seed=None if seed is None else int(seed),
            archetype=data.get("archetype"),
        )


# -- record validation and encoding -------------------------------------------------

def check_record(rec: TelemetryRecord, goal_ids: set[str], prev_t: float | None,
                 line: int | None = None) -> None:
    """Raise TrialFormatError if ``rec`` breaks a record invariant."""
    for name in RECORD_FIELDS[:7]:
        value = getattr(rec, name)
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
            raise TrialFormatError(f"{name} must be a finite number, got {value!r}", line, name)
    if rec.t < 0:
        raise TrialFormatError(f"t must be non-negative, got {rec.t!r}", line, "t")
    if prev_t is not None and not rec.t > prev_t:
        raise TrialFormatError(
            f"non-monotonic timestamp t={rec.t!r} after t={prev_t!r}", line, "t")
    if not -math.pi < rec.heading <= math.pi:
        raise TrialFormatError(f"heading {rec.heading!r} outside (-pi, pi]", line, "heading")
    if not 0.0 <= rec.head_yaw_deg <= 180.0:
        raise TrialFormatError(
            f"head_yaw_deg {rec.head_yaw_deg!r} outside [0, 180]", line, "head_yaw_deg")
    if not isinstance(rec.teleop_active, bool):
        raise TrialFormatError("teleop_active must be a bool", line, "teleop_active")
    if isinstance(rec.event, GoalInspected) and rec.event.goal_id not in goal_ids:
        raise TrialFormatError(
            f"event refers to unknown goal {rec.event.goal_id!r}", line, "event")
    if rec.event is not None:
        try:
            format_event(rec.event)
        except TypeError:
            raise TrialFormatError(f"unknown event {rec.event!r}", line, "event") from None


def format_record(rec: TelemetryRecord) -> str:
    nums = (rec.t, rec.x, rec.y, rec.heading, rec.v_cmd, rec.w_cmd, rec.head_yaw_deg)
    return ",".join(
        [*(repr(float(v)) for v in nums), "1" if rec.teleop_active else "0", format_event(rec.event)]
    )


def parse_record(text: str, line: int | None = None) -> TelemetryRecord:
    parts = text.split(",")
    if len(parts) != len(RECORD_FIELDS):
        raise TrialFormatError(
            f"expected {len(RECORD_FIELDS)} fields, found {len(parts)}", line,
            RECORD_FIELDS[min(len(parts), len(RECORD_FIELDS) - 1)])
    values: list[float] = []
    for name, raw in zip(RECORD_FIELDS[:7], parts):
        try:
            values.append(float(raw))
        except ValueError:
            raise TrialFormatError(f"cannot parse {raw!r} as a number", line, name) from None
    teleop = parts[7]
    if teleop not in ("0", "1"):
        raise TrialFormatError(f"teleop_active must be 0 or 1, got {teleop!r}", line, "teleop_active")
    try:
        event = parse_event(parts[8])
    except ValueError as exc:
        raise TrialFormatError(str(exc), line, "event") from None
    return TelemetryRecord(*values, teleop_active=teleop == "1", event=event)


# -- files ---------------------------------------------------------------------------

def write_trial(meta: TrialMeta, config: TaskConfig, records: Iterable[TelemetryRecord],
                path: str | os.PathLike[str]) -> Path:
    """Write a trial file. All records are validated before any byte is written."""
    records = list(records)
    goal_ids = set(config.goal_ids())
    prev_t = None
    for k, rec in enumerate(records):
        check_record(rec, goal_ids, prev_t, line=k + 2)
        prev_t = rec.t
    header = json.dumps({"meta": meta.to_dict(), "task": config.to_dict()},
                        sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for rec in records:
            fh.write(format_record(rec) + "\n")
    return path


def read_header(path: str | os.PathLike[str]) -> tuple[TrialMeta, TaskConfig]:
    with open(path, encoding="utf-8", newline="\n") as fh:
        first = fh.readline()
    return _parse_header(first)


def _parse_header(first: str) -> tuple[TrialMeta, TaskConfig]:
    if not first.strip():
        raise TrialFormatError("missing header", 1)
    try:
        header = json.loads(first)
        meta = TrialMeta.from_dict(header["meta"])
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise TrialFormatError(f"bad header: {exc}", 1, "meta") from None
    if "task" not in header:
        raise TrialFormatError("bad header: no task", 1, "task")
    try:
        task = TaskConfig.from_dict(header["task"])
    except (TaskConfigError, TypeError) as exc:
        raise TrialFormatError(f"bad header: {exc}", 1, "task") from None
    return meta, task


def read_trial(path: str | os.PathLike[str]) -> tuple[TrialMeta, TaskConfig, Iterator[TelemetryRecord]]:
    """Parse the header and return a lazy, validating record stream.

    Format errors inside the record section surface while iterating.
    """
    meta, task = read_header(path)
    return meta, task, _iter_records(Path(path), set(task.goal_ids()))


def _iter_records(path: Path, goal_ids: set[str]) -> Iterator[TelemetryRecord]:
    with open(path, encoding="utf-8", newline="\n") as fh:
        fh.readline()
        prev_t = None
        for lineno, text in enumerate(fh, start=2):
            text = text.rstrip("\n")
            if not text:
                continue
            rec = parse_record(text, lineno)
            check_record(rec, goal_ids, prev_t, lineno)
            prev_t = rec.t
            yield rec


def load_trial(path: str | os.PathLike[str]) -> tuple[TrialMeta, TaskConfig, list[TelemetryRecord]]:
    """Eager variant of :func:`read_trial`."""
    meta, task, records = read_trial(path)
    return meta, task, list(records)


# -- replay --------------------------------------------------------------------------

@dataclass(frozen=True)
class Unpaced:
    pass


@dataclass(frozen=True)
class Paced:
    rate: float = 1.0

    def __post_init__(self) -> None:
        if not self.rate > 0:
            raise ValueError(f"replay rate must be positive, got {self.rate}")


Pacing = Union[Paced, Unpaced]


def replay(records: Iterable[TelemetryRecord], pacing: Pacing = Unpaced(),
           clock: Callable[[], float] = time.monotonic,
           sleep: Callable[[float], None] = time.sleep) -> Iterator[TelemetryRecord]:
    """Yield records in order, optionally on a wall-clock schedule.

    With ``Paced(rate)`` record k is released no earlier than
    ``(t_k - t_0) / rate`` seconds after the first record.
    """
    if isinstance(pacing, Unpaced):
        yield from records
        return
    start_wall = start_t = None
    for rec in records:
        if start_wall is None:
            start_wall, start_t = clock(), rec.t
        else:
            due = start_wall + (rec.t - start_t) / pacing.rate
            while (remaining := due - clock()) > 0:
                sleep(remaining)
        yield rec
