"""All tunable model constants in one place.

Defaults reproduce the published model. A deployer can override any
subset with a nested mapping (usually loaded from a JSON params file);
overrides are validated in full before anything runs.
"""

from __future__ import annotations

import copy
import json
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .confidence import ATTENTION, INTENT, PERFORMANCE, SigmoidParams
from .fusion import FusionConfig
from .memory import IncidentPolicy
from .signals import IntentParams, MotionErrorParams


class ParamsError(ValueError):
    """Invalid or unknown model parameter."""


@dataclass(frozen=True)
class ModelParams:
    attention: SigmoidParams = ATTENTION
    intent_confidence: SigmoidParams = INTENT
    performance: SigmoidParams = PERFORMANCE
    fusion: FusionConfig = field(default_factory=FusionConfig)
    incidents: IncidentPolicy = field(default_factory=IncidentPolicy)
    intent: IntentParams = field(default_factory=IntentParams)
    motion_error: MotionErrorParams = field(default_factory=MotionErrorParams)

    def to_dict(self) -> dict[str, Any]:
        return {
            "attention": self.attention.to_dict(),
            "intent_confidence": self.intent_confidence.to_dict(),
            "performance": self.performance.to_dict(),
            "fusion": self.fusion.to_dict(),
            "incidents": self.incidents.to_dict(),
            "intent": self.intent.to_dict(),
            "motion_error": self.motion_error.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> ModelParams:
        return cls().merged(data)

    def merged(self, overrides: Mapping[str, Any]) -> ModelParams:
        """Return a copy with ``overrides`` deep-merged over these values."""
        base = self.to_dict()
        _deep_merge(base, overrides, path="")
        try:
            return ModelParams(
                attention=SigmoidParams.from_dict(base["attention"]),
                intent_confidence=SigmoidParams.from_dict(base["intent_confidence"]),
                performance=SigmoidParams.from_dict(base["performance"]),
                fusion=FusionConfig.from_dict(base["fusion"]),
                incidents=IncidentPolicy.from_dict(base["incidents"]),
                intent=IntentParams(**{k: float(v) for k, v in base["intent"].items()}),
                motion_error=MotionErrorParams(**{k: float(v) for k, v in base["motion_error"].items()}),
            )
        except (TypeError, ValueError, KeyError) as exc:
            raise ParamsError(str(exc)) from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


# Sections whose keys are open-ended (new incident kinds may be added).
_OPEN_SECTIONS = {"incidents"}


def _deep_merge(base: dict[str, Any], overrides: Mapping[str, Any], path: str) -> None:
    if not isinstance(overrides, Mapping):
        raise ParamsError(f"params section {path or '<root>'} must be an object")
    for key, value in overrides.items():
        where = f"{path}.{key}" if path else key
        if key not in base and path not in _OPEN_SECTIONS:
            raise ParamsError(f"unknown parameter {where!r}; expected one of {sorted(base)}")
        if isinstance(base.get(key), dict) and path not in _OPEN_SECTIONS:
            _deep_merge(base[key], value, where)
        else:
            base[key] = copy.deepcopy(value)


def load_params(path: str | Path, base: ModelParams | None = None) -> ModelParams:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParamsError(f"{path}: not valid JSON ({exc})") from exc
    return (base or ModelParams()).merged(data)
