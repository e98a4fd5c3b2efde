"""Incident events carried by telemetry records."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Collision:
    """The robot touched an obstacle."""

    kind = "collision"


@dataclass(frozen=True)
class GoalInspected:
    """The operator completed the dwell at a point of interest."""

    goal_id: str

    kind = "goal"


Event = Union[Collision, GoalInspected, None]


def format_event(event: Event) -> str:
    if event is None:
        return "-"
    if isinstance(event, Collision):
        return "C"
    if isinstance(event, GoalInspected):
        return f"G:{event.goal_id}"
    raise TypeError(f"unknown event {event!r}")


def parse_event(text: str) -> Event:
    if text == "-":
        return None
    if text == "C":
        return Collision()
    if text.startswith("G:") and len(text) > 2:
        return GoalInspected(text[2:])
    raise ValueError(f"unknown event tag {text!r}")
