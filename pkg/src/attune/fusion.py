"""Conditional weighted average of the confidence metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from .confidence import ConfidenceVector


@dataclass(frozen=True)
class FusionWeights:
    """Weights for (attention, performance, intent); must sum to one."""

    w1: float
    w2: float
    w3: float

    def __post_init__(self) -> None:
        ws = (self.w1, self.w2, self.w3)
        if any(not math.isfinite(w) or w < 0 for w in ws):
            raise ValueError(f"fusion weights must be non-negative, got {ws}")
        if abs(math.fsum(ws) - 1.0) > 1e-12:
            raise ValueError(f"fusion weights must sum to 1, got {ws} (sum {math.fsum(ws)!r})")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.w1, self.w2, self.w3)


@dataclass(frozen=True)
class FusionConfig:
    attention_threshold_deg: float = 17.0
    weights_above: FusionWeights = field(default_factory=lambda: FusionWeights(0.5, 0.15, 0.35))
    weights_at_or_below: FusionWeights = field(default_factory=lambda: FusionWeights(0.3, 0.15, 0.55))

    def weights_for(self, ha: float) -> FusionWeights:
        # strict: ha == threshold takes the at-or-below branch
        return self.weights_above if ha > self.attention_threshold_deg else self.weights_at_or_below

    def to_dict(self) -> dict[str, Any]:
        return {
            "attention_threshold_deg": self.attention_threshold_deg,
            "weights_above": list(self.weights_above.as_tuple()),
            "weights_at_or_below": list(self.weights_at_or_below.as_tuple()),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> FusionConfig:
        return cls(
            attention_threshold_deg=float(data["attention_threshold_deg"]),
            weights_above=FusionWeights(*map(float, data["weights_above"])),
            weights_at_or_below=FusionWeights(*map(float, data["weights_at_or_below"])),
        )


def fuse(cv: ConfidenceVector, ha: float, cfg: FusionConfig | None = None) -> float:
    """Instantaneous trust: weighted sum of the confidences.

    The weight set is chosen by whether the head yaw exceeds the attention
    threshold, which shifts weight onto attention while the operator is
    looking away from the interface.
    """
    cfg = cfg or FusionConfig()
    w = cfg.weights_for(ha)
    return w.w1 * cv.conf_h + w.w2 * cv.conf_e + w.w3 * cv.conf_i
