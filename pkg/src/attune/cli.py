"""Command-line entry point: ``attune simulate|estimate|rank|eval``.

Exit codes: 0 success, 1 data error, 2 configuration error, 3 partial
success (some trials skipped).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from collections.abc import Sequence
from pathlib import Path

from .engine import estimate_trial
from .evaluation import NoTrialsError, rank_agreement, report
from .params import ParamsError
from .simulator import (
    ARCHETYPES,
    SimulationConfigError,
    default_task,
    generate_trial,
    load_archetypes,
)
from .telemetry import (
    Paced,
    TaskConfigError,
    TrialFormatError,
    Unpaced,
    load_task,
    read_trial,
    write_trial,
)
from .traces import write_trace_csv, write_trace_svg

EXIT_OK, EXIT_DATA, EXIT_CONFIG, EXIT_PARTIAL = 0, 1, 2, 3
PROFILES_ENV = "ATTUNE_PROFILES_DIR"

log = logging.getLogger("attune")


class ConfigError(Exception):
    pass


def _load_overrides(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read params file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"params file {path} must hold a JSON object")
    return data


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        archetypes = load_archetypes(args.archetypes) if args.archetypes else ARCHETYPES
        if args.archetype not in archetypes:
            raise ConfigError(
                f"unknown archetype {args.archetype!r}; available: {', '.join(sorted(archetypes))}")
        task = load_task(args.task) if args.task else default_task()
        meta, records = generate_trial(task, archetypes[args.archetype], args.seed,
                                       operator_id=args.operator_id, trial_id=args.trial_id)
    except (ConfigError, SimulationConfigError, TaskConfigError, ParamsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    write_trial(meta, task, records, args.out)
    print(f"wrote {len(records)} records to {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_estimate(args: argparse.Namespace) -> int:
    try:
        overrides = _load_overrides(args.params)
        pacing = Paced(args.paced) if args.paced is not None else Unpaced()
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        meta, task, records = read_trial(args.trial)
        params = task.params.merged(overrides)
        if args.params:
            print(params.to_json(), file=sys.stderr)
        samples, engine = estimate_trial(records, task, params, pacing)
    except ParamsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (TrialFormatError, OSError) as exc:
        print(f"error: {args.trial}: {exc}", file=sys.stderr)
        return EXIT_DATA
    write_trace_csv(samples, args.out)
    if args.svg:
        write_trace_svg(samples, args.svg, title=f"{meta.operator_id} / {meta.trial_id}")
    mean = engine.mean_trust
    print(
        f"operator={meta.operator_id} "
        f"mean_trust={'absent' if mean is None else f'{mean:.6f}'} "
        f"stcf={engine.state.stcf:.6f} "
        f"incidents={engine.incidents['collision']} collisions, {engine.incidents['goal']} goals",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_rank(args: argparse.Namespace) -> int:
    try:
        overrides = _load_overrides(args.params)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = Path(args.out)
    profiles = args.profiles or os.environ.get(PROFILES_ENV) or out / "profiles"
    try:
        rep = report(args.trials, out, profiles_dir=profiles, overrides=overrides)
    except ParamsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NoTrialsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    tau = "absent" if rep.agreement is None else f"{rep.agreement:.4f}"
    print(f"operators={len(rep.rows)} tau_b={tau}")
    for name, reason in rep.skipped:
        print(f"skipped {name}: {reason}", file=sys.stderr)
    return EXIT_PARTIAL if rep.skipped else EXIT_OK


def read_ranks(path: str | os.PathLike[str], column: str) -> dict[str, float]:
    """Ranks from a CSV with ``operator_id``.

    Values come from ``column``, else a ``rank`` column, else row order.
    Rows with an empty rank are dropped.
    """
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    if rows and "operator_id" not in rows[0]:
        raise ValueError(f"{path}: no operator_id column")
    key = column if rows and column in rows[0] else ("rank" if rows and "rank" in rows[0] else None)
    if key is None:
        return {r["operator_id"]: float(k) for k, r in enumerate(rows, start=1)}
    return {r["operator_id"]: float(r[key]) for r in rows if r[key].strip()}


def cmd_eval(args: argparse.Namespace) -> int:
    try:
        trust = read_ranks(args.ranking, "trust_rank")
        capability = read_ranks(args.capability, "capability_rank")
        tau = rank_agreement(trust, capability)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    if math.isnan(tau):
        print("absent")
        return EXIT_DATA
    print(round(tau, 4))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="attune", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a synthetic trial file")
    p.add_argument("--task", help="task config JSON (default: built-in 20x20 m task)")
    p.add_argument("--archetype", required=True)
    p.add_argument("--archetypes", help="JSON file with extra or modified archetypes")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--operator-id")
    p.add_argument("--trial-id")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", help="estimate a trust trace for one trial")
    p.add_argument("--trial", required=True)
    p.add_argument("--out", required=True, help="trace CSV path")
    p.add_argument("--svg", help="optional SVG plot path")
    p.add_argument("--paced", type=float, metavar="RATE", help="replay on the wall clock at RATE")
    p.add_argument("--params", help="JSON params override file")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("rank", help="rank operators over a directory of trials")
    p.add_argument("--trials", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--params", help="JSON params override file")
    p.add_argument("--profiles", help=f"profile store directory (else ${PROFILES_ENV}, else OUT/profiles)")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("eval", help="Kendall tau-b between two ranking CSVs")
    p.add_argument("--ranking", required=True)
    p.add_argument("--capability", required=True)
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
