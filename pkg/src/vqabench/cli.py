"""Command-line front end: run, tune, analyze, exact, schedule.

Exit codes: 0 success, 2 configuration error, 3 infeasible budget or
schedule.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np
import yaml

from vqabench import analysis
from vqabench.paulis import format_float
from vqabench.racing import Dimension, ParamSpace, race
from vqabench.runner import (
    ConfigError,
    ExperimentConfig,
    build_problem,
    build_schedule,
    load_config,
    read_summary,
    run_experiment,
    run_single,
)
from vqabench.schedules import ScheduleError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3

SPSA_SPACE = ParamSpace((
    Dimension("a", "real", 0.01, 2.0),
    Dimension("alpha", "real", 0.0, 1.0),
    Dimension("c", "real", 0.01, 2.0),
    Dimension("gamma", "real", 0.0, 1.0 / 6.0),
))

CMA_SPACE = ParamSpace((
    Dimension("sigma0", "real", 0.25, 1.1),
    Dimension("population", "integer", 30, 130),
    Dimension("mu", "real", 0.0, 0.5),
    Dimension("cmean", "real", 0.0, 1.0),
    Dimension("damp", "real", 0.0, 1.0),
))


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ScheduleError as exc:
        print(f"infeasible schedule: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vqabench",
        description="Gradient-free optimizer benchmarks for VQE under shot noise",
    )
    sub = parser.add_subparsers(required=True)

    p_run = sub.add_parser("run", help="execute the configured experiment batch")
    _common_flags(p_run)
    p_run.set_defaults(handler=cmd_run)

    p_tune = sub.add_parser("tune", help="race optimizer hyperparameters")
    _common_flags(p_tune)
    p_tune.set_defaults(handler=cmd_tune)

    p_analyze = sub.add_parser("analyze", help="aggregate summaries into figure tables")
    p_analyze.add_argument("summaries", nargs="+", help="summary.csv files")
    p_analyze.add_argument("--out", default="analysis_out")
    p_analyze.set_defaults(handler=cmd_analyze)

    p_exact = sub.add_parser("exact", help="report E0 and c0 for the configured problem")
    _common_flags(p_exact)
    p_exact.set_defaults(handler=cmd_exact)

    p_schedule = sub.add_parser("schedule", help="print the configured shot schedule")
    _common_flags(p_schedule)
    p_schedule.set_defaults(handler=cmd_schedule)
    return parser


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", required=True, help="experiment config (flat YAML)")
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=None, help="override base_seed")


def _load(args) -> tuple[ExperimentConfig, Path]:
    config = load_config(args.config)
    if args.seed is not None:
        data = dict(config.raw)
        data["base_seed"] = args.seed
        config = _reparse(data, Path(args.config).parent)
    return config, Path(args.config).parent


def _reparse(data: dict, base_dir: Path) -> ExperimentConfig:
    from vqabench.runner import parse_config

    return parse_config(data, base_dir)


def cmd_run(args) -> int:
    config, base_dir = _load(args)
    outcomes = run_experiment(config, args.out, workers=max(1, args.workers),
                              base_dir=base_dir)
    for outcome in outcomes:
        print(
            f"{outcome.run_id}: evals={outcome.result.evaluations} "
            f"shots={outcome.result.shots_spent} "
            f"dre_best={outcome.comparison.dre_best:.3e} "
            f"dre_fav={outcome.comparison.dre_fav:.3e}"
        )
    print(f"summary: {Path(args.out) / 'summary.csv'}")
    return EXIT_OK


def cmd_exact(args) -> int:
    config, base_dir = _load(args)
    problem = build_problem(config, base_dir)
    exact = analysis.exact_ground(problem.hamiltonian, problem.sector)
    sector = exact.sector.label() if exact.sector else "full"
    print(f"label      {problem.label}")
    print(f"qubits     {problem.hamiltonian.n_qubits}")
    print(f"sector     {sector}")
    print(f"E0         {format_float(exact.e0)}")
    print(f"c0         {format_float(problem.hamiltonian.identity_coeff)}")
    print(f"degeneracy {exact.degeneracy}")
    unrestricted = analysis.exact_ground(problem.hamiltonian, None)
    if abs(unrestricted.e0 - exact.e0) > 1e-9:
        print(f"E0(full)   {format_float(unrestricted.e0)}  # differs from sector")
    return EXIT_OK


def cmd_schedule(args) -> int:
    config, _ = _load(args)
    schedule = build_schedule(config)
    print(schedule.describe())
    for index, stage in enumerate(schedule.stages):
        print(f"stage {index}: {stage.evaluations} evaluations at "
              f"{stage.shots_per_pauli} shots per Pauli")
    return EXIT_OK


def cmd_analyze(args) -> int:
    rows = []
    for path in args.summaries:
        if not Path(path).is_file():
            raise ConfigError(f"summary file not found: {path}")
        rows.extend(read_summary(path))
    if not rows:
        raise ConfigError("no summary rows found")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        key = (row["label"], row["optimizer"], row["schedule"], row["budget_per_pauli"])
        groups.setdefault(key, []).append(row)

    error_lines = ["label,optimizer,schedule,budget_per_pauli,n,"
                   "mean_dre_best,ci_low,ci_high,mean_dre_fav,ci_low_fav,ci_high_fav"]
    cand_lines = ["label,optimizer,schedule,budget_per_pauli,n,candidate,mean_de,ci_low,ci_high"]
    for key in sorted(groups):
        members = groups[key]
        n = len(members)
        prefix = ",".join(key) + f",{n}"
        best = _ci([float(r["dre_best"]) for r in members])
        fav = _ci([float(r["dre_fav"]) for r in members])
        error_lines.append(f"{prefix},{best},{fav}")
        for candidate, column in [
            ("noisy_best", "de_noisy_best"),
            ("best", "de_best"),
            ("favourite", "de_fav"),
        ]:
            stats_csv = _ci([float(r[column]) for r in members])
            cand_lines.append(f"{prefix},{candidate},{stats_csv}")
    (out / "figure_error.csv").write_text("\n".join(error_lines) + "\n")
    (out / "figure_candidates.csv").write_text("\n".join(cand_lines) + "\n")
    print(f"wrote {out / 'figure_error.csv'}")
    print(f"wrote {out / 'figure_candidates.csv'}")
    return EXIT_OK


def _ci(values: list[float]) -> str:
    mean, low, high = analysis.mean_confidence_interval(values)
    fmt = lambda v: format_float(v) if v is not None else ""
    return f"{format_float(mean)},{fmt(low)},{fmt(high)}"


def cmd_tune(args) -> int:
    config, base_dir = _load(args)
    raw = config.raw
    optimizer = str(raw.get("tune_optimizer", config.optimizer)).lower()
    if optimizer not in ("spsa", "cma"):
        raise ConfigError(f"tune_optimizer must be 'spsa' or 'cma', got {optimizer!r}")
    budget = int(raw.get("tune_budget", 500))
    reps = int(raw.get("tune_reps", 2))
    seeds_per_eval = int(raw.get("tune_seeds", 2))
    run_budget = int(raw.get("tune_run_budget", max(1000, config.budget_per_pauli // 100)))
    run_evals = int(raw.get("tune_run_evaluations", 100))

    problem = build_problem(config, base_dir)
    exact = analysis.exact_ground(problem.hamiltonian, problem.sector)
    space = SPSA_SPACE if optimizer == "spsa" else CMA_SPACE

    from vqabench.sampling import ShotLedger, ShotRng, noisy_cost
    from vqabench.schedules import one_stage
    from vqabench.optimizers import (CmaConfig, SpsaConfig, cma_minimize,
                                     spsa_minimize)
    from vqabench.ansatz import prepare

    schedule = one_stage(run_budget, run_evals)

    def objective(values: dict, instance_seed: int) -> float:
        scores = []
        for offset in range(seeds_per_eval):
            seed = instance_seed * seeds_per_eval + offset
            ledger = ShotLedger(schedule.total_shots)
            stream = ShotRng(seed)

            def cost(params, shots):
                state = prepare(problem.circuit, params)
                return noisy_cost(state, problem.hamiltonian, shots, ledger, stream).value

            x0 = np.zeros(problem.circuit.n_params)
            if optimizer == "spsa":
                opt_config = SpsaConfig(a=values["a"], alpha=values["alpha"],
                                        c=values["c"], gamma=values["gamma"], seed=seed)
                result = spsa_minimize(cost, x0, opt_config, schedule, ledger)
            else:
                opt_config = CmaConfig(
                    sigma0=values["sigma0"], population=int(values["population"]),
                    parent_fraction=values["mu"], c_mean=values["cmean"],
                    damp_factor=values["damp"], seed=seed,
                )
                result = cma_minimize(cost, x0, opt_config, schedule, ledger)
            comparison = analysis.compare_candidates(
                result, problem.circuit, problem.hamiltonian, exact
            )
            scores.append(comparison.dre_best)
        return float(np.median(scores))

    outcome = race(space, objective, budget=budget, initial_reps=reps,
                   seed=config.base_seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_tune_report(out / "tuner_report.txt", outcome)
    elites_path = out / f"tuned_{optimizer}.yaml"
    _write_elites(elites_path, optimizer, outcome, config)
    for elite in outcome.elites:
        print("elite:", {k: round(v, 6) for k, v in elite.values.items()},
              f"median_dre={elite.mean_score:.4e}")
    print(f"wrote {elites_path}")
    return EXIT_OK


def _write_tune_report(path: Path, outcome) -> None:
    lines = [f"budget {outcome.budget} used {outcome.evaluations_used}"]
    for report in outcome.generations:
        lines.append(f"generation {report.generation}: "
                     f"{len(report.configs)} configs, "
                     f"instances {report.instance_seeds}")
        for index, config in enumerate(report.configs):
            scores = " ".join(format_float(s) for s in report.scores[index])
            pretty = " ".join(f"{k}={v:.6g}" for k, v in config.items())
            lines.append(f"  config {index}: {pretty} scores [{scores}]")
        for elim in report.eliminations:
            pretty = " ".join(f"{k}={v:.6g}" for k, v in elim.config.items())
            lines.append(
                f"  eliminated round {elim.round_index} p={elim.friedman_p:.6g}: {pretty}"
            )
    lines.append("elites:")
    for elite in outcome.elites:
        pretty = " ".join(f"{k}={v:.6g}" for k, v in elite.values.items())
        lines.append(f"  {pretty} mean={format_float(elite.mean_score)} n={elite.n_scores}")
    path.write_text("\n".join(lines) + "\n")


def _write_elites(path: Path, optimizer: str, outcome, config: ExperimentConfig) -> None:
    """Emit the best elite as a config fragment bench `run` consumes directly."""
    if not outcome.elites:
        path.write_text("# no elites survived\n")
        return
    best = outcome.elites[0].values
    if optimizer == "spsa":
        fragment = {
            "optimizer": "spsa",
            "spsa_a": float(best["a"]),
            "spsa_alpha": float(best["alpha"]),
            "spsa_c": float(best["c"]),
            "spsa_gamma": float(best["gamma"]),
        }
    else:
        fragment = {
            "optimizer": "cma",
            "cma_sigma0": float(best["sigma0"]),
            "cma_population": int(best["population"]),
            "cma_mu": float(best["mu"]),
            "cma_cmean": float(best["cmean"]),
            "cma_damp": float(best["damp"]),
        }
    with open(path, "w") as fh:
        yaml.safe_dump(fragment, fh, sort_keys=True)


if __name__ == "__main__":
    sys.exit(main())
