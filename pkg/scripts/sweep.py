"""Run a grid of simulations and summarise false negatives / false positives."""

import argparse
import json
import time

from bloomclock import SimConfig, run_simulation


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--events", type=int, default=5000)
    parser.add_argument("--m", type=int, default=128)
    parser.add_argument("--k", type=int, default=4)
    parser.add_argument("--seeds", type=int, default=2)
    parser.add_argument("--json", help="also write the rows to this file")
    args = parser.parse_args()

    rows = []
    header = f"{'nodes':>5} {'drop':>5} {'seed':>4} {'FN':>3} {'FP':>7} {'comparable':>10} {'emp_fp':>9} {'pred_fp':>8} {'secs':>5}"
    print(header)
    for nodes in (4, 16, 64):
        for drop in (0.0, 0.3, 0.9):
            for seed in range(1, args.seeds + 1):
                start = time.perf_counter()
                cfg = SimConfig(n_nodes=nodes, m=args.m, k=args.k, n_events=args.events, drop_rate=drop, seed=seed)
                _, met = run_simulation(cfg)
                secs = time.perf_counter() - start
                rows.append({"config": cfg.as_dict(), "metrics": met.as_dict()})
                print(
                    f"{nodes:>5} {drop:>5} {seed:>4} {met.false_negative_count:>3} "
                    f"{met.false_positive_count:>7} {met.comparable_pairs:>10} "
                    f"{met.empirical_fp_rate or 0:9.2e} {met.mean_predicted_fp or 0:8.4f} {secs:5.1f}"
                )
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
