#!/usr/bin/env python3
"""One- vs three-stage shot schedules on the 2x2 Hubbard model, desk scale.

Runs SPSA and CMA-ES under both protocols at a reduced per-Pauli budget
and prints the relative-error table (mean and 95% CI over the
repetitions). Writes summary CSVs per protocol/optimizer combination.
"""

import argparse
from pathlib import Path

from vqabench.analysis import mean_confidence_interval
from vqabench.runner import parse_config, run_experiment


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="stage_comparison_out")
    parser.add_argument("--budget", type=int, default=200_000,
                        help="shot budget per Pauli operator")
    parser.add_argument("--reps", type=int, default=15)
    parser.add_argument("--seed", type=int, default=1000)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    base = {
        "problem": "hubbard", "nx": 2, "ny": 2, "t": 1.0, "u": 2.0,
        "ansatz": "vha", "layers": 2,
        "n_repetitions": args.reps, "base_seed": args.seed,
    }
    evaluations = 1000
    stage_shots = [
        max(1, args.budget // 14_000 * 2),
        max(2, args.budget // 1_400),
        max(3, args.budget // 140),
    ]
    protocols = {
        "one_stage": {"schedule": "one_stage", "evaluations": evaluations},
        "three_stage": {"schedule": "three_stage", "stage_shots": stage_shots},
    }

    print(f"budget {args.budget} per Pauli, {args.reps} repetitions\n")
    rows = []
    for optimizer in ("spsa", "cma"):
        for name, extra in protocols.items():
            data = dict(base, optimizer=optimizer,
                        budget_per_pauli=args.budget,
                        label=f"hub2x2-{optimizer}-{name}", **extra)
            config = parse_config(data)
            out = Path(args.out) / f"{optimizer}_{name}"
            outcomes = run_experiment(config, out, workers=args.workers)
            dre = [o.comparison.dre_best for o in outcomes]
            mean, low, high = mean_confidence_interval(dre)
            rows.append((optimizer, name, mean, low, high))
            print(f"{optimizer:5s} {name:12s} dre_best mean {mean:.4e} "
                  f"ci [{low:.4e}, {high:.4e}]  -> {out}/summary.csv")

    print("\nwinner by mean:", min(rows, key=lambda r: r[2])[:2])


if __name__ == "__main__":
    main()
