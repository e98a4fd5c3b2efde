"""Operator ranking by trust versus capability, and agreement scoring."""

from __future__ import annotations

import csv
import io
import logging
import math
import os
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from scipy import stats

from .engine import TrustSample, estimate_trial
from .events import Collision, GoalInspected
from .memory import ProfileStore, RunSummary
from .params import ModelParams
from .telemetry import TaskConfig, TelemetryRecord, TrialMeta, load_trial
from .traces import write_trace_csv, write_trace_svg

log = logging.getLogger(__name__)

RANKING_COLUMNS = (
    "operator_id", "mean_trust", "trust_rank", "collisions", "missed_goals",
    "total_time_s", "capability_rank", "archetype",
)
TRIAL_SUFFIX = ".trial"
TRUST_TIE_TOL = 1e-12


class NoTrialsError(ValueError):
    pass


@dataclass(frozen=True)
class CapabilityRecord:
    operator_id: str
    total_time_s: float
    collisions: int
    goals_inspected: int
    goals_total: int

    def __post_init__(self) -> None:
        if self.collisions < 0 or self.goals_inspected < 0 or self.goals_total < 0:
            raise ValueError(f"{self.operator_id}: counts must be non-negative")
        if self.goals_inspected > self.goals_total:
            raise ValueError(f"{self.operator_id}: goals_inspected exceeds goals_total")

    @property
    def missed_goals(self) -> int:
        return self.goals_total - self.goals_inspected

    @classmethod
    def from_records(cls, operator_id: str, records: Sequence[TelemetryRecord],
                     goals_total: int) -> CapabilityRecord:
        inspected = {r.event.goal_id for r in records if isinstance(r.event, GoalInspected)}
        return cls(
            operator_id=operator_id,
            total_time_s=records[-1].t if records else 0.0,
            collisions=sum(isinstance(r.event, Collision) for r in records),
            goals_inspected=len(inspected),
            goals_total=goals_total,
        )


def _average_ranks(keys: Sequence[object]) -> list[float]:
    """1-based ranks of ``keys`` in ascending order, ties sharing the mean rank."""
    order = sorted(range(len(keys)), key=lambda k: keys[k])
    ranks = [0.0] * len(keys)
    start = 0
    while start < len(order):
        end = start
        while end + 1 < len(order) and keys[order[end + 1]] == keys[order[start]]:
            end += 1
        for pos in range(start, end + 1):
            ranks[order[pos]] = (start + end) / 2 + 1
        start = end + 1
    return ranks


def capability_rank(records: Iterable[CapabilityRecord]) -> list[tuple[CapabilityRecord, float]]:
    """Order operators safety-first: fewest collisions, then missed goals, then time."""
    records = list(records)
    if not records:
        raise ValueError("capability_rank needs at least one record")
    ids = [r.operator_id for r in records]
    dupes = sorted({i for i in ids if ids.count(i) > 1})
    if dupes:
        raise ValueError(f"duplicate operator_id(s): {dupes}")
    keys = [(r.collisions, r.missed_goals, r.total_time_s) for r in records]
    ranks = _average_ranks(keys)
    rows = sorted(zip(records, ranks), key=lambda rr: (rr[1], rr[0].operator_id))
    return rows


def trust_rank(mean_trust: Mapping[str, float]) -> list[tuple[str, float, int]]:
    """Order operators by mean trust, highest first.

    Means within ``TRUST_TIE_TOL`` of each other count as equal and are
    ordered by operator_id. Positions are 1..N without shared ranks.
    """
    rows = sorted(mean_trust.items(), key=lambda kv: (-kv[1], kv[0]))
    ordered: list[tuple[str, float]] = []
    k = 0
    while k < len(rows):
        group = [rows[k]]
        while k + len(group) < len(rows) and group[0][1] - rows[k + len(group)][1] <= TRUST_TIE_TOL:
            group.append(rows[k + len(group)])
        ordered.extend(sorted(group, key=lambda kv: kv[0]))
        k += len(group)
    return [(op, m, pos) for pos, (op, m) in enumerate(ordered, start=1)]


def _as_ranks(r: Sequence[str] | Mapping[str, float]) -> dict[str, float]:
    if isinstance(r, Mapping):
        return {str(k): float(v) for k, v in r.items()}
    if len(set(r)) != len(r):
        raise ValueError("ordering contains duplicate operators")
    return {op: float(pos) for pos, op in enumerate(r, start=1)}


def rank_agreement(r1: Sequence[str] | Mapping[str, float],
                   r2: Sequence[str] | Mapping[str, float]) -> float:
    """Kendall tau-b between two rankings of the same operators.

    Each ranking is either an ordered sequence of ids (best first) or a
    mapping from id to rank value (ties allowed). Returns NaN when tau-b is
    undefined (fewer than two operators, or a ranking that is all ties).
    """
    a, b = _as_ranks(r1), _as_ranks(r2)
    if set(a) != set(b):
        only_a, only_b = sorted(set(a) - set(b)), sorted(set(b) - set(a))
        raise ValueError(f"rankings cover different operators: only in first {only_a}, only in second {only_b}")
    ids = sorted(a)
    if len(ids) < 2:
        return math.nan
    tau = stats.kendalltau([a[i] for i in ids], [b[i] for i in ids], variant="b").statistic
    return float(tau)


# -- trial processing -----------------------------------------------------------------

@dataclass
class TrialResult:
    meta: TrialMeta
    capability: CapabilityRecord
    samples: list[TrustSample]
    summary: RunSummary


def evaluate_trial(meta: TrialMeta, task: TaskConfig, records: Sequence[TelemetryRecord],
                   params: ModelParams | None = None) -> TrialResult:
    samples, engine = estimate_trial(records, task, params)
    return TrialResult(
        meta=meta,
        capability=CapabilityRecord.from_records(meta.operator_id, records, len(task.goals)),
        samples=samples,
        summary=engine.summary(meta.trial_id),
    )


@dataclass
class ReportRow:
    operator_id: str
    mean_trust: float | None
    trust_rank: int | None
    collisions: int
    missed_goals: int
    total_time_s: float
    capability_rank: float
    archetype: str | None


@dataclass
class RankingReport:
    rows: list[ReportRow]
    agreement: float | None
    skipped: list[tuple[str, str]] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(RANKING_COLUMNS)
        for r in self.rows:
            writer.writerow([
                r.operator_id,
                "" if r.mean_trust is None else repr(r.mean_trust),
                "" if r.trust_rank is None else r.trust_rank,
                r.collisions, r.missed_goals, repr(float(r.total_time_s)),
                _fmt_rank(r.capability_rank), r.archetype or "",
            ])
        return buf.getvalue()


def _fmt_rank(rank: float) -> str:
    return str(int(rank)) if float(rank).is_integer() else repr(rank)


def build_report(results: Sequence[TrialResult]) -> RankingReport:
    """Aggregate trial results per operator and rank them both ways.

    Per operator: mean trust is the mean of the per-trial mean short-term
    trust (trials without teleoperated samples are left out); collisions and
    missed goals are summed; time is the mean trial time.
    """
    if not results:
        raise NoTrialsError("no trials")
    by_op: dict[str, list[TrialResult]] = defaultdict(list)
    for res in results:
        by_op[res.meta.operator_id].append(res)

    capability: list[CapabilityRecord] = []
    means: dict[str, float] = {}
    archetypes: dict[str, str | None] = {}
    for op, trials in sorted(by_op.items()):
        capability.append(CapabilityRecord(
            operator_id=op,
            total_time_s=math.fsum(t.capability.total_time_s for t in trials) / len(trials),
            collisions=sum(t.capability.collisions for t in trials),
            goals_inspected=sum(t.capability.goals_inspected for t in trials),
            goals_total=sum(t.capability.goals_total for t in trials),
        ))
        trial_means = [t.summary.mean_short_term_trust for t in trials
                       if t.summary.mean_short_term_trust is not None]
        if trial_means:
            means[op] = math.fsum(trial_means) / len(trial_means)
        kinds = {t.meta.archetype for t in trials}
        archetypes[op] = kinds.pop() if len(kinds) == 1 else None

    cap_rows = capability_rank(capability)
    cap_rank = {rec.operator_id: rank for rec, rank in cap_rows}
    trust_rows = trust_rank(means)
    t_rank = {op: pos for op, _, pos in trust_rows}

    order = [op for op, _, _ in trust_rows] + sorted(set(by_op) - set(t_rank))
    cap_by_id = {rec.operator_id: rec for rec in capability}
    rows = [
        ReportRow(
            operator_id=op,
            mean_trust=means.get(op),
            trust_rank=t_rank.get(op),
            collisions=cap_by_id[op].collisions,
            missed_goals=cap_by_id[op].missed_goals,
            total_time_s=cap_by_id[op].total_time_s,
            capability_rank=cap_rank[op],
            archetype=archetypes[op],
        )
        for op in order
    ]

    agreement = None
    if len(t_rank) >= 2:
        tau = rank_agreement({op: float(r) for op, r in t_rank.items()},
                             {op: cap_rank[op] for op in t_rank})
        agreement = None if math.isnan(tau) else tau
    return RankingReport(rows=rows, agreement=agreement)


def _safe_name(text: str) -> str:
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in text)


def report(trials_dir: str | os.PathLike[str], out_dir: str | os.PathLike[str],
           profiles_dir: str | os.PathLike[str] | None = None,
           overrides: Mapping[str, object] | None = None) -> RankingReport:
    """Estimate every ``*.trial`` file in ``trials_dir`` and write the artifacts.

    Writes ``ranking.csv`` plus ``trace_<operator>_<trial>.csv`` and ``.svg``
    per trial into ``out_dir``. Operator profiles under ``profiles_dir`` are
    updated once per trial, in file-name order. ``overrides`` is a nested
    params mapping merged over each trial's own parameters. Unreadable trials are logged
    and listed in ``RankingReport.skipped``.
    """
    trials_dir, out_dir = Path(trials_dir), Path(out_dir)
    paths = sorted(trials_dir.glob(f"*{TRIAL_SUFFIX}"))
    if not paths:
        raise NoTrialsError(f"no trials in {trials_dir}")
    out_dir.mkdir(parents=True, exist_ok=True)
    store = ProfileStore(profiles_dir) if profiles_dir is not None else None

    results: list[TrialResult] = []
    skipped: list[tuple[str, str]] = []
    for path in paths:
        try:
            meta, task, records = load_trial(path)
        except (ValueError, OSError) as exc:
            log.warning("skipping %s: %s", path.name, exc)
            skipped.append((path.name, str(exc)))
            continue
        params = task.params.merged(overrides) if overrides else None
        res = evaluate_trial(meta, task, records, params)
        results.append(res)
        stem = f"trace_{_safe_name(meta.operator_id)}_{_safe_name(meta.trial_id)}"
        write_trace_csv(res.samples, out_dir / f"{stem}.csv")
        write_trace_svg(res.samples, out_dir / f"{stem}.svg",
                        title=f"{meta.operator_id} / {meta.trial_id}")
        if store is not None:
            store.finalize(meta.operator_id, res.summary)

    if not results:
        raise NoTrialsError(f"no readable trials in {trials_dir}")
    rep = build_report(results)
    rep.skipped = skipped
    with open(out_dir / "ranking.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(rep.to_csv())
    return rep
