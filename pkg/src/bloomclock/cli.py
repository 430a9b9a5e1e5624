"""Command-line entry point: ``bloomclock simulate`` and ``bloomclock fpr``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
from pathlib import Path
from typing import Sequence

import bloomclock
from bloomclock.clock import PreconditionError, overlap_probability
from bloomclock.montecarlo import montecarlo_overlap
from bloomclock.simulator import (
    ConfigError,
    DelayModel,
    SimConfig,
    Simulation,
    sample_pairs,
)

log = logging.getLogger("bloomclock")

METRICS_SCHEMA_VERSION = 1
PAIR_COLUMNS = ("t_i_a", "t_i_b", "ground_truth", "bloom_verdict", "delta_sum", "fp_predicted", "accepted")


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _pairs_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PAIR_COLUMNS)
    for r in rows:
        writer.writerow(
            (
                r.t_a,
                r.t_b,
                r.ground_truth.value,
                r.bloom_verdict.value,
                r.delta_sum,
                "" if r.fp_predicted is None else repr(r.fp_predicted),
                "" if r.accepted is None else str(r.accepted).lower(),
            )
        )
    return buf.getvalue()


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        config = SimConfig(
            n_nodes=args.nodes,
            m=args.m,
            k=args.k,
            n_events=args.events,
            drop_rate=args.drop,
            delay=DelayModel.parse(args.delay),
            seed=args.seed,
            fp_threshold=args.fp_threshold,
            history_cap=args.history_cap,
            pair_sample_cap=args.pair_cap,
        )
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {name: str(out / name) for name in ("manifest.json", "metrics.json", "pairs.csv")}
    manifest = {
        "config": config.as_dict(),
        "seed": config.seed,
        "version": bloomclock.__version__,
        "outputs": paths,
    }
    _atomic_write(out / "manifest.json", _dump(manifest))

    sim = Simulation(config)
    records = sim.run()
    metrics = sim.metrics()
    log.info("simulated %d events, %d pairs", metrics.n_events, metrics.n_pairs)
    _atomic_write(out / "pairs.csv", _pairs_csv(sample_pairs(records, config)))
    _atomic_write(
        out / "metrics.json",
        _dump({"schema_version": METRICS_SCHEMA_VERSION, **metrics.as_dict()}),
    )
    if metrics.false_negative_count:
        print(
            f"error: {metrics.false_negative_count} false negatives (causally ordered pairs "
            "judged concurrent by the bloom clock)",
            file=sys.stderr,
        )
        return 1
    print(
        f"events={metrics.n_events} pairs={metrics.n_pairs} false_negatives=0 "
        f"false_positives={metrics.false_positive_count} -> {out}"
    )
    return 0


def cmd_fpr(args: argparse.Namespace) -> int:
    if args.m < 1 or args.a_sum < 0:
        print("error: need m >= 1 and a-sum >= 0", file=sys.stderr)
        return 1
    if args.b_sum < args.a_sum:
        print(
            f"error: b-sum ({args.b_sum}) must be >= a-sum ({args.a_sum}); "
            "the dominating clock's sum goes in --b-sum",
            file=sys.stderr,
        )
        return 1
    print(f"{overlap_probability(args.m, args.a_sum, args.b_sum):.4f}")
    if args.montecarlo:
        try:
            est = montecarlo_overlap(args.m, args.a_sum, args.b_sum, args.montecarlo, args.seed)
        except (ValueError, PreconditionError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print(f"montecarlo {est.mean:.4f} +/- {est.stderr:.4f} ({est.trials} trials)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bloomclock", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a broadcast simulation and export metrics")
    sim.add_argument("--nodes", type=int, default=4)
    sim.add_argument("--m", type=int, default=128)
    sim.add_argument("--k", type=int, default=4)
    sim.add_argument("--events", type=int, default=1000)
    sim.add_argument("--drop", type=float, default=0.0)
    sim.add_argument("--delay", default="uniform:1,5", help="fixed:D or uniform:LO,HI (virtual ticks)")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--fp-threshold", type=float, default=0.05)
    sim.add_argument("--history-cap", type=int, default=None)
    sim.add_argument("--pair-cap", type=int, default=10_000, help="max rows in pairs.csv")
    sim.add_argument("--out-dir", default="out")
    sim.set_defaults(func=cmd_simulate)

    fpr = sub.add_parser("fpr", help="overlap false-positive rate for two clock sums")
    fpr.add_argument("--m", type=int, required=True)
    fpr.add_argument("--a-sum", type=int, required=True)
    fpr.add_argument("--b-sum", type=int, required=True)
    fpr.add_argument("--montecarlo", type=int, default=0, metavar="TRIALS")
    fpr.add_argument("--seed", type=int, default=0)
    fpr.set_defaults(func=cmd_fpr)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
