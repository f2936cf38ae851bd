"""Experiment orchestration: config parsing, seeded batches, persistence.

Configs are flat YAML key-value files (all keys top-level scalars, plus
one small list for the three-stage shots). Repetition ``i`` runs with
seed ``base_seed + i``; every run writes a line-per-evaluation trace
file and one row to ``summary.csv``. All floats are written with 17
significant digits in lowercase e-notation so reruns are byte-identical.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from vqabench import analysis
from vqabench.ansatz import AnsatzCircuit, build_ucc, build_vha, hubbard_sector, prepare
from vqabench.dense import Sector
from vqabench.fermions import (
    HubbardSpec,
    build_hubbard,
    read_generators,
)
from vqabench.optimizers import (
    CmaConfig,
    OptResult,
    SpsaConfig,
    cma_minimize,
    spsa_minimize,
)
from vqabench.paulis import PauliSum, format_float, read_hamiltonian
from vqabench.sampling import ShotLedger, ShotRng, noisy_cost
from vqabench.schedules import ScheduleError, ShotSchedule, one_stage, three_stage
from vqabench.statevector import expectation_sum


class ConfigError(ValueError):
    """Invalid experiment configuration; message lists every problem found."""


@dataclass(frozen=True)
class ExperimentConfig:
    problem: str
    nx: int = 0
    ny: int = 0
    t: float = 1.0
    u: float = 2.0
    n_particles: int = 0
    ansatz: str = ""
    layers: int = 0
    generators: str = ""
    optimizer: str = "cma"
    schedule: str = "one_stage"
    budget_per_pauli: int = 0
    evaluations: int = 0
    stage_shots: tuple[int, int, int] = (0, 0, 0)
    n_repetitions: int = 15
    base_seed: int = 0
    label: str = ""
    noise_floor_p: float = 0.0228
    spsa: SpsaConfig = field(default_factory=SpsaConfig)
    cma: CmaConfig = field(default_factory=CmaConfig)
    raw: dict = field(default_factory=dict)


_KNOWN_KEYS = {
    "problem", "nx", "ny", "t", "u", "n_particles",
    "ansatz", "layers", "generators",
    "optimizer",
    "spsa_a", "spsa_alpha", "spsa_c", "spsa_gamma", "spsa_A",
    "cma_sigma0", "cma_population", "cma_mu", "cma_cmean", "cma_damp",
    "schedule", "budget_per_pauli", "evaluations", "stage_shots",
    "n_repetitions", "base_seed", "label", "noise_floor_p",
    "tune_optimizer", "tune_budget", "tune_reps", "tune_seeds",
    "tune_run_budget", "tune_run_evaluations",
}


def parse_config(data: dict, base_dir: Path | None = None) -> ExperimentConfig:
    """Validate a config mapping exhaustively; raise ConfigError with all faults."""
    errors: list[str] = []
    if not isinstance(data, dict):
        raise ConfigError("config must be a flat mapping of keys to values")
    for key in data:
        if key not in _KNOWN_KEYS:
            errors.append(f"unknown key {key!r}")

    def get(key, kind, default=None, required=False):
        if key not in data:
            if required:
                errors.append(f"missing required key {key!r}")
            return default
        value = data[key]
        try:
            if kind is int and isinstance(value, bool):
                raise TypeError
            return kind(value)
        except (TypeError, ValueError):
            errors.append(f"key {key!r}: expected {kind.__name__}, got {value!r}")
            return default

    problem = str(data.get("problem", "")) if "problem" in data else ""
    if not problem:
        errors.append("missing required key 'problem'")
    nx = get("nx", int, 0)
    ny = get("ny", int, 0)
    t = get("t", float, 1.0)
    u = get("u", float, 2.0)
    n_particles = get("n_particles", int, 0)
    if problem == "hubbard":
        if nx is None or ny is None or nx < 1 or ny < 1 or nx * ny < 2:
            errors.append(f"hubbard lattice {nx}x{ny} needs at least 2 sites")
    elif problem:
        path = _resolve(problem, base_dir)
        if not path.is_file():
            errors.append(f"problem file not found: {path}")

    ansatz = str(data.get("ansatz", "")).lower()
    if problem == "hubbard":
        ansatz = ansatz or "vha"
        if ansatz != "vha":
            errors.append(f"hubbard problems use the 'vha' ansatz, got {ansatz!r}")
    else:
        ansatz = ansatz or "ucc"
        if ansatz != "ucc":
            errors.append(f"file problems use the 'ucc' ansatz, got {ansatz!r}")
    layers = get("layers", int, 0)
    if ansatz == "vha" and (layers is None or layers < 1):
        errors.append("vha ansatz requires layers >= 1")
    generators = str(data.get("generators", ""))
    if ansatz == "ucc":
        if not generators:
            errors.append("ucc ansatz requires a 'generators' file")
        elif not _resolve(generators, base_dir).is_file():
            errors.append(f"generators file not found: {_resolve(generators, base_dir)}")

    optimizer = str(data.get("optimizer", "cma")).lower()
    if optimizer not in ("cma", "spsa"):
        errors.append(f"optimizer must be 'cma' or 'spsa', got {optimizer!r}")

    schedule = str(data.get("schedule", "one_stage")).lower()
    if schedule not in ("one_stage", "three_stage"):
        errors.append(f"schedule must be 'one_stage' or 'three_stage', got {schedule!r}")
    budget = get("budget_per_pauli", int, 0, required=True)
    if budget is not None and "budget_per_pauli" in data and budget < 1:
        errors.append(f"budget_per_pauli must be >= 1, got {budget}")
    evaluations = get("evaluations", int, 0)
    if schedule == "one_stage" and (evaluations is None or evaluations < 1):
        errors.append("one_stage schedule requires 'evaluations' >= 1")
    stage_shots = (0, 0, 0)
    if schedule == "three_stage":
        raw_shots = data.get("stage_shots")
        if (
            not isinstance(raw_shots, (list, tuple))
            or len(raw_shots) != 3
            or not all(isinstance(s, int) and not isinstance(s, bool) for s in raw_shots)
        ):
            errors.append("three_stage schedule requires 'stage_shots: [s1, s2, s3]'")
        else:
            stage_shots = tuple(raw_shots)

    n_repetitions = get("n_repetitions", int, 15)
    if n_repetitions is not None and n_repetitions < 1:
        errors.append(f"n_repetitions must be >= 1, got {n_repetitions}")
    base_seed = get("base_seed", int, 0)
    label = str(data.get("label", ""))
    noise_floor_p = get("noise_floor_p", float, 0.0228)

    spsa_kwargs = {}
    for key, name in [("spsa_a", "a"), ("spsa_alpha", "alpha"), ("spsa_c", "c"),
                      ("spsa_gamma", "gamma"), ("spsa_A", "stability_offset")]:
        if key in data:
            spsa_kwargs[name] = get(key, float)
    cma_kwargs = {}
    for key, name, kind in [
        ("cma_sigma0", "sigma0", float),
        ("cma_population", "population", int),
        ("cma_mu", "parent_fraction", float),
        ("cma_cmean", "c_mean", float),
        ("cma_damp", "damp_factor", float),
    ]:
        if key in data:
            cma_kwargs[name] = get(key, kind)
    try:
        spsa = SpsaConfig(**{k: v for k, v in spsa_kwargs.items() if v is not None})
    except ValueError as exc:
        errors.append(f"spsa hyperparameters: {exc}")
        spsa = SpsaConfig()
    try:
        cma = CmaConfig(**{k: v for k, v in cma_kwargs.items() if v is not None})
    except ValueError as exc:
        errors.append(f"cma hyperparameters: {exc}")
        cma = CmaConfig()

    if errors:
        raise ConfigError("invalid config:\n  " + "\n  ".join(errors))
    return ExperimentConfig(
        problem=problem,
        nx=nx, ny=ny, t=t, u=u, n_particles=n_particles,
        ansatz=ansatz, layers=layers, generators=generators,
        optimizer=optimizer,
        schedule=schedule, budget_per_pauli=budget,
        evaluations=evaluations or 0, stage_shots=stage_shots,
        n_repetitions=n_repetitions, base_seed=base_seed,
        label=label or _default_label(problem, nx, ny, t, u),
        noise_floor_p=noise_floor_p,
        spsa=spsa, cma=cma, raw=dict(data),
    )


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    with open(path) as fh:
        try:
            data = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError(f"config is not valid YAML: {exc}") from exc
    return parse_config(data or {}, base_dir=path.parent)


def _default_label(problem, nx, ny, t, u):
    if problem == "hubbard":
        return f"hubbard-{nx}x{ny}"
    return Path(problem).stem if problem else "problem"


def _resolve(path_str: str, base_dir: Path | None) -> Path:
    path = Path(path_str)
    if not path.is_absolute() and base_dir is not None:
        path = base_dir / path
    return path


# ---------------------------------------------------------------------------
# Problem and schedule construction
# ---------------------------------------------------------------------------

@dataclass
class Problem:
    hamiltonian: PauliSum
    circuit: AnsatzCircuit
    sector: Sector | None
    label: str
    electrons: int


def build_problem(config: ExperimentConfig, base_dir: Path | None = None) -> Problem:
    if config.problem == "hubbard":
        spec = HubbardSpec(config.nx, config.ny, config.t, config.u,
                           config.n_particles)
        partition = build_hubbard(spec)
        circuit = build_vha(partition, config.layers)
        sector = hubbard_sector(partition)
        return Problem(partition.total(), circuit, sector, config.label,
                       spec.filling)
    h, electrons = read_hamiltonian(_resolve(config.problem, base_dir))
    generators, n_qubits, gen_electrons = read_generators(
        _resolve(config.generators, base_dir)
    )
    if n_qubits != h.n_qubits:
        raise ConfigError(
            f"generator file is on {n_qubits} qubits, Hamiltonian on {h.n_qubits}"
        )
    circuit = build_ucc(generators, gen_electrons or electrons)
    sector = Sector(n_particles=electrons)
    return Problem(h, circuit, sector, config.label, electrons)


def build_schedule(config: ExperimentConfig) -> ShotSchedule:
    if config.schedule == "one_stage":
        return one_stage(config.budget_per_pauli, config.evaluations)
    return three_stage(config.budget_per_pauli, config.stage_shots)


# ---------------------------------------------------------------------------
# Single-run execution
# ---------------------------------------------------------------------------

@dataclass
class RunOutcome:
    run_id: str
    seed: int
    result: OptResult
    comparison: analysis.CandidateComparison
    noise_floor_width: float
    e0: float
    c0: float


def run_single(
    problem: Problem,
    config: ExperimentConfig,
    schedule: ShotSchedule,
    seed: int,
    run_id: str,
    exact: analysis.ExactSolution,
) -> RunOutcome:
    h = problem.hamiltonian
    circuit = problem.circuit
    ledger = ShotLedger(schedule.total_shots)
    stream = ShotRng(seed)

    def cost(params: np.ndarray, shots: int) -> float:
        state = prepare(circuit, params)
        return noisy_cost(state, h, shots, ledger, stream).value

    x0 = np.zeros(circuit.n_params)
    if config.optimizer == "spsa":
        opt_config = SpsaConfig(**{**_as_kwargs(config.spsa), "seed": seed})
        result = spsa_minimize(cost, x0, opt_config, schedule, ledger)
    else:
        opt_config = CmaConfig(**{**_as_kwargs(config.cma), "seed": seed})
        result = cma_minimize(cost, x0, opt_config, schedule, ledger)

    comparison = analysis.compare_candidates(result, circuit, h, exact)
    floor = analysis.noise_floor(
        h,
        exact.ground_vector,
        schedule.stages[-1].shots_per_pauli,
        config.noise_floor_p,
    )
    return RunOutcome(
        run_id=run_id,
        seed=seed,
        result=result,
        comparison=comparison,
        noise_floor_width=floor.width,
        e0=exact.e0,
        c0=h.identity_coeff,
    )


def _as_kwargs(cfg) -> dict:
    if isinstance(cfg, SpsaConfig):
        return {
            "a": cfg.a, "alpha": cfg.alpha, "c": cfg.c, "gamma": cfg.gamma,
            "stability_offset": cfg.stability_offset,
        }
    return {
        "sigma0": cfg.sigma0, "population": cfg.population,
        "parent_fraction": cfg.parent_fraction, "c_mean": cfg.c_mean,
        "damp_factor": cfg.damp_factor,
    }


# ---------------------------------------------------------------------------
# Batch execution and persistence
# ---------------------------------------------------------------------------

SUMMARY_COLUMNS = [
    "run_id", "seed", "label", "optimizer", "schedule", "budget_per_pauli",
    "evaluations", "shots_spent", "e0", "c0",
    "noisy_best", "c_best", "c_fav",
    "de_noisy_best", "de_best", "de_fav",
    "dre_best", "dre_fav", "noise_floor_width",
    "best_params", "favourite_params",
]


def run_experiment(config: ExperimentConfig, out_dir, workers: int = 1,
                   base_dir: Path | None = None) -> list[RunOutcome]:
    out = Path(out_dir)
    traces = out / "traces"
    traces.mkdir(parents=True, exist_ok=True)
    problem = build_problem(config, base_dir)
    schedule = build_schedule(config)
    exact = analysis.exact_ground(problem.hamiltonian, problem.sector)

    tasks = [
        (problem, config, schedule, config.base_seed + i, f"{config.label}-r{i:03d}", exact)
        for i in range(config.n_repetitions)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_task, tasks))
    else:
        outcomes = [_run_task(task) for task in tasks]

    for outcome in outcomes:
        _write_trace(traces / f"{outcome.run_id}.trace", config, schedule,
                     problem, outcome)
    _write_summary(out / "summary.csv", config, outcomes)
    with open(out / "config_echo.yaml", "w") as fh:
        yaml.safe_dump(config.raw, fh, sort_keys=True)
    return outcomes


def _run_task(task) -> RunOutcome:
    return run_single(*task)


def _write_trace(path, config, schedule, problem, outcome: RunOutcome) -> None:
    result = outcome.result
    lines = [
        "# vqabench trace v1",
        f"# run_id {outcome.run_id}",
        f"# seed {outcome.seed}",
        f"# label {problem.label}",
        f"# initial_state {problem.circuit.initial_state.description or 'hartree-fock'}",
        f"# schedule {schedule.describe()}",
        "# config " + " ".join(f"{k}={v}" for k, v in sorted(result.config_echo.items())),
        "# columns eval stage shots cumulative value params...",
    ]
    for record in result.trace:
        params = " ".join(format_float(v) for v in record.params)
        lines.append(
            f"{record.evaluation_index} {record.stage_index} {record.shots} "
            f"{record.cumulative_shots} {format_float(record.value)} {params}"
        )
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_summary(path, config: ExperimentConfig, outcomes: list[RunOutcome]) -> None:
    rows = [",".join(SUMMARY_COLUMNS)]
    for outcome in outcomes:
        comparison = outcome.comparison
        result = outcome.result
        best = ";".join(format_float(v) for v in result.best_params)
        fav = ";".join(format_float(v) for v in result.favourite_params)
        row = [
            outcome.run_id,
            str(outcome.seed),
            config.label,
            config.optimizer,
            config.schedule,
            str(config.budget_per_pauli),
            str(result.evaluations),
            str(result.shots_spent),
            format_float(outcome.e0),
            format_float(outcome.c0),
            format_float(comparison.noisy_best),
            format_float(comparison.c_best),
            format_float(comparison.c_fav),
            format_float(comparison.de_noisy_best),
            format_float(comparison.de_best),
            format_float(comparison.de_fav),
            format_float(comparison.dre_best),
            format_float(comparison.dre_fav),
            format_float(outcome.noise_floor_width),
            best,
            fav,
        ]
        rows.append(",".join(row))
    with open(path, "w") as fh:
        fh.write("\n".join(rows) + "\n")


def read_summary(path) -> list[dict]:
    with open(path) as fh:
        lines = [line.rstrip("\n") for line in fh if line.strip()]
    header = lines[0].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[1:]]
