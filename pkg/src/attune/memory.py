"""Trust coefficient factors and the episodic operator memory.

Within a run, incidents shift a short-term coefficient (``stcf``) that is
added to the fused trust. Across runs, the net incident sum of each
finished run scales a long-term reputation coefficient (``ltcf``).
"""

from __future__ import annotations

import json
import math
import os
from collections.abc import Mapping
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any

from .events import Event

STCF_RANGE = (-1.0, 1.0)
LTCF_RANGE = (0.0, 2.0)


def _clamp(value: float, lo: float, hi: float) -> float:
    return min(max(value, lo), hi)


@dataclass(frozen=True)
class IncidentPolicy:
    """Signed trust adjustment per incident kind."""

    magnitudes: Mapping[str, float] = field(
        default_factory=lambda: {"goal": 0.033, "collision": -0.2}
    )

    def __post_init__(self) -> None:
        for kind, value in self.magnitudes.items():
            if not math.isfinite(value):
                raise ValueError(f"incident magnitude for {kind!r} must be finite, got {value}")
        object.__setattr__(self, "magnitudes", dict(self.magnitudes))

    def __getitem__(self, kind: str) -> float:
        try:
            return self.magnitudes[kind]
        except KeyError:
            raise KeyError(
                f"unknown incident kind {kind!r}; policy knows {sorted(self.magnitudes)}"
            ) from None

    def to_dict(self) -> dict[str, float]:
        return dict(self.magnitudes)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> IncidentPolicy:
        return cls({str(k): float(v) for k, v in data.items()})


def incident_kind(event: Event) -> str | None:
    return None if event is None else event.kind


@dataclass(frozen=True)
class TrustState:
    instant_trust: float = 0.0
    stcf: float = 0.0
    ltcf: float = 1.0

    @property
    def raw_short_term_trust(self) -> float:
        """Unclamped ``instant_trust + stcf``; spans [-1, 2]."""
        return self.instant_trust + self.stcf

    @property
    def short_term_trust(self) -> float:
        return short_term_trust(self.instant_trust, self.stcf)

    def with_instant(self, instant_trust: float) -> TrustState:
        return replace(self, instant_trust=instant_trust)


def short_term_trust(instant_trust: float, stcf: float) -> float:
    return _clamp(instant_trust + stcf, 0.0, 1.0)


def apply_incident(state: TrustState, kind: str, policy: IncidentPolicy | None = None) -> TrustState:
    """Shift the short-term coefficient by the policy magnitude for ``kind``."""
    policy = policy or IncidentPolicy()
    return replace(state, stcf=_clamp(state.stcf + policy[kind], *STCF_RANGE))


@dataclass
class RunSummary:
    trial_id: str
    mean_short_term_trust: float | None
    net_incident_sum: float
    incident_counts: dict[str, int] = field(default_factory=dict)


@dataclass
class OperatorProfile:
    """Long-term memory of one operator: reputation plus run history."""

    operator_id: str
    ltcf: float = 1.0
    history: list[RunSummary] = field(default_factory=list)

    def long_term_trust(self, mean_short_term_trust: float) -> float:
        return _clamp(mean_short_term_trust * self.ltcf, 0.0, 1.0)

    def to_dict(self) -> dict[str, Any]:
        return {
            "operator_id": self.operator_id,
            "ltcf": self.ltcf,
            "history": [asdict(run) for run in self.history],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> OperatorProfile:
        ltcf = float(data["ltcf"])
        if not LTCF_RANGE[0] <= ltcf <= LTCF_RANGE[1]:
            raise ValueError(f"ltcf {ltcf} outside {LTCF_RANGE}")
        return cls(
            operator_id=str(data["operator_id"]),
            ltcf=ltcf,
            history=[RunSummary(**run) for run in data.get("history", [])],
        )


def finalize_run(profile: OperatorProfile, run: RunSummary) -> OperatorProfile:
    """Fold a finished run into the operator's reputation.

    ``ltcf <- clamp(ltcf * (1 + net_incident_sum), 0, 2)``. Returns a new
    profile; the input is left untouched.
    """
    ltcf = _clamp(profile.ltcf * (1.0 + run.net_incident_sum), *LTCF_RANGE)
    return OperatorProfile(profile.operator_id, ltcf, [*profile.history, run])


class ProfileStore:
    """One JSON file per operator under a directory."""

    def __init__(self, root: str | os.PathLike[str]) -> None:
        self.root = Path(root)

    def path_for(self, operator_id: str) -> Path:
        return self.root / f"{operator_id}.json"

    def load(self, operator_id: str) -> OperatorProfile:
        path = self.path_for(operator_id)
        if not path.exists():
            return OperatorProfile(operator_id)
        return OperatorProfile.from_dict(json.loads(path.read_text(encoding="utf-8")))

    def save(self, profile: OperatorProfile) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        path = self.path_for(profile.operator_id)
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(profile.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        os.replace(tmp, path)
        return path

    def finalize(self, operator_id: str, run: RunSummary) -> OperatorProfile:
        profile = finalize_run(self.load(operator_id), run)
        self.save(profile)
        return profile
