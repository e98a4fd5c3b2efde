"""Logistic confidence maps for attention, intent and performance."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from .params import ModelParams


class Orientation(str, Enum):
    DECREASING = "decreasing"
    INCREASING = "increasing"


@dataclass(frozen=True)
class SigmoidParams:
    """Slope, midpoint and direction of a logistic curve."""

    k: float
    x0: float
    orientation: Orientation = Orientation.DECREASING

    def __post_init__(self) -> None:
        if not (math.isfinite(self.k) and self.k > 0):
            raise ValueError(f"sigmoid slope k must be positive, got {self.k}")
        if not math.isfinite(self.x0):
            raise ValueError(f"sigmoid midpoint x0 must be finite, got {self.x0}")
        object.__setattr__(self, "orientation", Orientation(self.orientation))

    def to_dict(self) -> dict[str, Any]:
        return {"k": self.k, "x0": self.x0, "orientation": self.orientation.value}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SigmoidParams:
        return cls(float(data["k"]), float(data["x0"]), Orientation(data["orientation"]))


ATTENTION = SigmoidParams(2.5, 17.0, Orientation.DECREASING)
INTENT = SigmoidParams(13.0, 0.5, Orientation.INCREASING)
PERFORMANCE = SigmoidParams(11.0, 0.5, Orientation.DECREASING)


def logistic(x: float, params: SigmoidParams) -> float:
    """Evaluate the logistic curve described by ``params`` at ``x``.

    Decreasing curves are ``1 / (1 + exp(k*x - k*x0))``; increasing ones
    negate the exponent. The exponent is formed as ``k*x - k*x0`` so the
    default constants reproduce the published formulas to the last bit.
    """
    if not math.isfinite(x):
        raise ValueError(f"logistic input must be finite, got {x}")
    z = params.k * x - params.k * params.x0
    if params.orientation is Orientation.INCREASING:
        z = -z
    if z > 700.0:
        # exp would overflow; 1/(1+e^z) ~= e^-z here
        return math.exp(-z)
    return 1.0 / (1.0 + math.exp(z))


@dataclass(frozen=True)
class ConfidenceVector:
    """Instantaneous confidences in the operator.

    Mathematically each value lies in (0, 1); in double precision the
    asymptotes can round to exactly 0.0 or 1.0.
    """

    conf_h: float
    conf_e: float
    conf_i: float

    def __post_init__(self) -> None:
        for name in ("conf_h", "conf_e", "conf_i"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.conf_h, self.conf_e, self.conf_i)


def confidences(ha: float, i: float, p: float, params: ModelParams | None = None) -> ConfidenceVector:
    """Map head yaw (deg), intent probability and motion error to confidences."""
    if params is None:
        attention, intent, performance = ATTENTION, INTENT, PERFORMANCE
    else:
        attention, intent, performance = params.attention, params.intent_confidence, params.performance
    return ConfidenceVector(
        conf_h=logistic(ha, attention),
        conf_e=logistic(p, performance),
        conf_i=logistic(i, intent),
    )
