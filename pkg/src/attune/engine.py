"""Per-trial streaming trust estimation.

One :class:`TrustEngine` per trial wires the signal estimators, the
confidence maps, the fusion rule and the short-term memory together. Signal
state advances on every record; trust samples are only emitted while the
operator is teleoperating.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass

from .confidence import confidences
from .fusion import fuse
from .memory import RunSummary, TrustState, apply_incident, incident_kind
from .params import ModelParams
from .signals import IntentEstimator, MotionErrorEstimator
from .telemetry import Pacing, TaskConfig, TelemetryRecord, Unpaced, replay


class OutOfOrderRecord(ValueError):
    pass


@dataclass(frozen=True)
class TrustSample:
    t: float
    conf_h: float
    conf_e: float
    conf_i: float
    i: float
    p: float
    instant_trust: float
    short_term_trust: float


class TrustEngine:
    def __init__(self, task: TaskConfig, params: ModelParams | None = None) -> None:
        self.task = task
        self.params = params or task.params
        self.intent = IntentEstimator(task.goals, self.params.intent)
        self.motion = MotionErrorEstimator(task.goals, self.params.motion_error)
        self.state = TrustState()
        self.incidents: Counter[str] = Counter()
        self._incident_values: list[float] = []
        self._last_t: float | None = None
        self._trust_sum = 0.0
        self._n_samples = 0

    def step(self, rec: TelemetryRecord) -> TrustSample | None:
        if self._last_t is not None and not rec.t > self._last_t:
            raise OutOfOrderRecord(f"record at t={rec.t!r} does not follow t={self._last_t!r}")
        self._last_t = rec.t

        i = self.intent.update(rec)
        p = self.motion.update(rec)
        kind = incident_kind(rec.event)
        if kind is not None:
            self.state = apply_incident(self.state, kind, self.params.incidents)
            self.incidents[kind] += 1
            self._incident_values.append(self.params.incidents[kind])

        if not rec.teleop_active:
            return None
        cv = confidences(rec.head_yaw_deg, i, p, self.params)
        self.state = self.state.with_instant(fuse(cv, rec.head_yaw_deg, self.params.fusion))
        sample = TrustSample(
            t=rec.t, conf_h=cv.conf_h, conf_e=cv.conf_e, conf_i=cv.conf_i, i=i, p=p,
            instant_trust=self.state.instant_trust,
            short_term_trust=self.state.short_term_trust,
        )
        self._trust_sum += sample.short_term_trust
        self._n_samples += 1
        return sample

    @property
    def n_samples(self) -> int:
        return self._n_samples

    @property
    def mean_trust(self) -> float | None:
        """Running mean of short-term trust over emitted samples."""
        if self._n_samples == 0:
            return None
        return self._trust_sum / self._n_samples

    @property
    def net_incident_sum(self) -> float:
        return math.fsum(self._incident_values)

    def summary(self, trial_id: str) -> RunSummary:
        return RunSummary(
            trial_id=trial_id,
            mean_short_term_trust=self.mean_trust,
            net_incident_sum=self.net_incident_sum,
            incident_counts=dict(sorted(self.incidents.items())),
        )


def estimate_trial(records: Iterable[TelemetryRecord], task: TaskConfig,
                   params: ModelParams | None = None,
                   pacing: Pacing = Unpaced()) -> tuple[list[TrustSample], TrustEngine]:
    """Run a fresh engine over a (replayed) record stream."""
    engine = TrustEngine(task, params)
    samples = []
    for rec in replay(records, pacing):
        sample = engine.step(rec)
        if sample is not None:
            samples.append(sample)
    return samples, engine
