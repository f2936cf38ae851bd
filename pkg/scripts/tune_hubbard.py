#!/usr/bin/env python3
"""Race CMA-ES (or SPSA) hyperparameters on the 2x2 Hubbard model.

Desk-scale stand-in for the full tuning campaign: reduced per-run
budget, median relative error over two seeded runs per instance, 500
objective evaluations. Prints the surviving elites.
"""

import argparse
from pathlib import Path

import yaml

from vqabench.cli import main as cli_main


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--optimizer", choices=["cma", "spsa"], default="cma")
    parser.add_argument("--out", default="tune_out")
    parser.add_argument("--tune-budget", type=int, default=500)
    parser.add_argument("--run-budget", type=int, default=20_000)
    parser.add_argument("--run-evals", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    config = {
        "problem": "hubbard", "nx": 2, "ny": 2, "t": 1.0, "u": 2.0,
        "ansatz": "vha", "layers": 2,
        "optimizer": args.optimizer,
        "schedule": "one_stage",
        "budget_per_pauli": args.run_budget,
        "evaluations": args.run_evals,
        "base_seed": args.seed,
        "tune_optimizer": args.optimizer,
        "tune_budget": args.tune_budget,
        "tune_reps": 2,
        "tune_seeds": 2,
        "tune_run_budget": args.run_budget,
        "tune_run_evaluations": args.run_evals,
    }
    cfg_path = out / "tune_config.yaml"
    cfg_path.write_text(yaml.safe_dump(config, sort_keys=True))
    raise SystemExit(cli_main(["tune", "--config", str(cfg_path), "--out", str(out)]))


if __name__ == "__main__":
    main()
