"""SPSA and CMA-ES on noisy cost evaluations with shot-schedule accounting.

Both optimizers consume evaluation slots from a ShotSchedule and stop
when the slots run out or the ledger refuses the next evaluation; there
is no value-based early exit. Every measured evaluation lands in the
trace, and two candidates are always reported: the best-ever measured
point and a favourite (CMA-ES: the final distribution mean; SPSA: the
final iterate).

The cost callable has signature ``cost(params, shots) -> float`` and may
raise BudgetExhausted; optimizer-internal randomness (perturbation
directions, population sampling) is driven by the config seed and is
independent of the measurement noise streams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from vqabench.sampling import BudgetExhausted, ShotLedger
from vqabench.schedules import ShotSchedule

CostFn = Callable[[np.ndarray, int], float]

GAMMA_MAX = 1.0 / 6.0


@dataclass(frozen=True)
class SpsaConfig:
    a: float = 0.15
    alpha: float = 0.602
    c: float = 0.2
    gamma: float = 0.101
    stability_offset: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.a <= 0 or self.c <= 0:
            raise ValueError(f"a and c must be positive, got a={self.a}, c={self.c}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if not 0.0 <= self.gamma <= GAMMA_MAX + 1e-12:
            raise ValueError(f"gamma must be in [0, 1/6], got {self.gamma}")
        if self.stability_offset < 0:
            raise ValueError(f"stability offset must be >= 0, got {self.stability_offset}")

    def echo(self) -> dict:
        return {
            "optimizer": "spsa",
            "a": self.a,
            "alpha": self.alpha,
            "c": self.c,
            "gamma": self.gamma,
            "A": self.stability_offset,
            "seed": self.seed,
        }


def default_population(n_params: int) -> int:
    """ceil(4 + 3 ln m), the canonical CMA-ES population default."""
    return math.ceil(4 + 3 * math.log(n_params))


@dataclass(frozen=True)
class CmaConfig:
    sigma0: float = 0.15
    population: int | None = None  # None: ceil(4 + 3 ln m)
    parent_fraction: float = 0.5
    c_mean: float = 1.0
    damp_factor: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.sigma0 <= 0:
            raise ValueError(f"sigma0 must be positive, got {self.sigma0}")
        if self.population is not None and self.population < 2:
            raise ValueError(f"population must be >= 2, got {self.population}")
        if not 0.0 < self.parent_fraction <= 0.5:
            raise ValueError(
                f"parent fraction must be in (0, 0.5], got {self.parent_fraction}"
            )
        if not 0.0 <= self.c_mean <= 1.0:
            raise ValueError(f"c_mean must be in [0, 1], got {self.c_mean}")
        if not 0.0 < self.damp_factor <= 1.0:
            raise ValueError(f"damp factor must be in (0, 1], got {self.damp_factor}")

    def population_for(self, n_params: int) -> int:
        return self.population if self.population else default_population(n_params)

    def echo(self) -> dict:
        return {
            "optimizer": "cma",
            "sigma0": self.sigma0,
            "population": self.population if self.population else "default",
            "mu": self.parent_fraction,
            "c_mean": self.c_mean,
            "damp_factor": self.damp_factor,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class RunRecord:
    evaluation_index: int
    stage_index: int
    shots: int
    params: np.ndarray
    value: float
    cumulative_shots: int


@dataclass
class OptResult:
    best_params: np.ndarray
    best_noisy_value: float | None
    favourite_params: np.ndarray
    evaluations: int
    shots_spent: int
    trace: list[RunRecord]
    config_echo: dict = field(default_factory=dict)
    restarts: int = 0


def extract_candidates(result: OptResult) -> tuple[np.ndarray, np.ndarray]:
    """(best-ever measured params, favourite params); both defined always."""
    return result.best_params, result.favourite_params


class _EvalLoop:
    """Shared slot iteration, ledger guard, trace and best-ever tracking."""

    def __init__(self, cost: CostFn, schedule: ShotSchedule, ledger: ShotLedger):
        self.cost = cost
        self.slots: Iterator[tuple[int, int]] = schedule.slots()
        self.ledger = ledger
        self.trace: list[RunRecord] = []
        self.cumulative_shots = 0
        self.best_value: float | None = None
        self.best_params: np.ndarray | None = None
        self.exhausted = False

    def next_slot(self) -> tuple[int, int] | None:
        if self.exhausted:
            return None
        slot = next(self.slots, None)
        if slot is None or not self.ledger.can_afford(slot[1]):
            self.exhausted = True
            return None
        return slot

    def evaluate(self, params: np.ndarray, slot: tuple[int, int]) -> float | None:
        stage_index, shots = slot
        try:
            value = float(self.cost(params, shots))
        except BudgetExhausted:
            self.exhausted = True
            return None
        self.cumulative_shots += shots
        point = np.array(params, dtype=float)
        self.trace.append(
            RunRecord(
                evaluation_index=len(self.trace),
                stage_index=stage_index,
                shots=shots,
                params=point,
                value=value,
                cumulative_shots=self.cumulative_shots,
            )
        )
        if self.best_value is None or value < self.best_value:
            self.best_value = value
            self.best_params = point
        return value

    def result(self, x0: np.ndarray, favourite: np.ndarray, echo: dict,
               restarts: int = 0) -> OptResult:
        best = self.best_params if self.best_params is not None else np.array(x0, dtype=float)
        return OptResult(
            best_params=best,
            best_noisy_value=self.best_value,
            favourite_params=np.array(favourite, dtype=float),
            evaluations=len(self.trace),
            shots_spent=self.cumulative_shots,
            trace=self.trace,
            config_echo=echo,
            restarts=restarts,
        )


def spsa_minimize(
    cost: CostFn,
    x0: np.ndarray,
    config: SpsaConfig,
    schedule: ShotSchedule,
    ledger: ShotLedger,
) -> OptResult:
    """Simultaneous perturbation iteration with decaying gain sequences.

    Iterate k uses a_k = a / (A + k + 1)^alpha and c_k = c / (k + 1)^gamma;
    the two-sided evaluations along a Rademacher direction estimate every
    partial derivative at once. Gains run on across stage boundaries.
    """
    theta = np.array(x0, dtype=float)
    rng = np.random.Generator(np.random.PCG64(config.seed))
    loop = _EvalLoop(cost, schedule, ledger)
    k = 0
    while True:
        slot_plus = loop.next_slot()
        if slot_plus is None:
            break
        slot_minus = loop.next_slot()
        if slot_minus is None:
            break
        a_k = config.a / (config.stability_offset + k + 1) ** config.alpha
        c_k = config.c / (k + 1) ** config.gamma
        delta = rng.integers(0, 2, size=theta.size) * 2.0 - 1.0
        value_plus = loop.evaluate(theta + c_k * delta, slot_plus)
        if value_plus is None:
            break
        value_minus = loop.evaluate(theta - c_k * delta, slot_minus)
        if value_minus is None:
            break
        gradient = (value_plus - value_minus) / (2.0 * c_k) * delta
        theta = theta - a_k * gradient
        k += 1
    return loop.result(x0, favourite=theta, echo=config.echo())


def _safe_eigh(cov: np.ndarray) -> tuple[np.ndarray, np.ndarray] | None:
    """Eigendecomposition guarded against numerical breakdown."""
    try:
        evals, basis = np.linalg.eigh((cov + cov.T) / 2.0)
    except np.linalg.LinAlgError:
        return None
    if not (np.all(np.isfinite(evals)) and np.all(np.isfinite(basis))):
        return None
    if evals[-1] <= 0 or evals[0] < -1e-12 * max(1.0, float(evals[-1])):
        return None
    return evals, basis


def cma_minimize(
    cost: CostFn,
    x0: np.ndarray,
    config: CmaConfig,
    schedule: ShotSchedule,
    ledger: ShotLedger,
) -> OptResult:
    """(mu/mu_w, lambda) CMA-ES with rank-1 plus rank-mu covariance updates.

    Only the five exposed hyperparameters deviate from the reference
    algorithm's defaults: initial step size, population, parent fraction
    (recombination uses log-decreasing weights over ceil(mu * lambda)
    parents), the mean learning rate, and a multiplier on the step-size
    damping. Ranking ties break by sample index; a failed covariance
    decomposition restarts the sampler at sigma0 at most three times.
    """
    mean = np.array(x0, dtype=float)
    n = mean.size
    lam = config.population_for(n)
    mu_count = max(1, math.ceil(config.parent_fraction * lam))
    raw = np.log(mu_count + 0.5) - np.log(np.arange(1, mu_count + 1))
    weights = raw / raw.sum()
    mu_eff = 1.0 / np.sum(weights ** 2)

    cc = (4 + mu_eff / n) / (n + 4 + 2 * mu_eff / n)
    cs = (mu_eff + 2) / (n + mu_eff + 5)
    c1 = 2 / ((n + 1.3) ** 2 + mu_eff)
    cmu = min(1 - c1, 2 * (mu_eff - 2 + 1 / mu_eff) / ((n + 2) ** 2 + mu_eff))
    damps = config.damp_factor * (
        1 + 2 * max(0.0, math.sqrt((mu_eff - 1) / (n + 1)) - 1) + cs
    )
    chi_n = math.sqrt(n) * (1 - 1 / (4 * n) + 1 / (21 * n ** 2))

    sigma = config.sigma0
    cov = np.eye(n)
    p_c = np.zeros(n)
    p_s = np.zeros(n)
    rng = np.random.Generator(np.random.PCG64(config.seed))
    loop = _EvalLoop(cost, schedule, ledger)
    generation = 0
    restarts = 0

    while True:
        slots = []
        while len(slots) < lam:
            slot = loop.next_slot()
            if slot is None:
                break
            slots.append(slot)
        if not slots:
            break

        decomposition = _safe_eigh(cov)
        if decomposition is None:
            restarts += 1
            if restarts > 3:
                break
            cov = np.eye(n)
            p_c = np.zeros(n)
            p_s = np.zeros(n)
            sigma = config.sigma0
            decomposition = np.ones(n), np.eye(n)
        evals, basis = decomposition
        scales = np.sqrt(np.maximum(evals, 1e-30))

        z = rng.standard_normal((lam, n))
        population = mean + sigma * (z * scales) @ basis.T
        values = np.empty(lam)
        completed = 0
        for i in range(len(slots)):
            value = loop.evaluate(population[i], slots[i])
            if value is None:
                break
            values[i] = value
            completed += 1
        if completed < lam:
            break  # partial final generation is measured but not used to update

        order = np.argsort(values, kind="stable")
        parents = population[order[:mu_count]]
        mean_old = mean
        selected = weights @ parents
        mean = mean_old + config.c_mean * (selected - mean_old)

        # selection displacement, undoing the c_mean scaling as pycma does
        y_mean = (mean - mean_old) / (config.c_mean * sigma)
        inv_sqrt_y = basis @ ((basis.T @ y_mean) / scales)
        p_s = (1 - cs) * p_s + math.sqrt(cs * (2 - cs) * mu_eff) * inv_sqrt_y
        generation += 1
        hsig = float(
            np.dot(p_s, p_s) / n / (1 - (1 - cs) ** (2 * generation))
            < 2 + 4.0 / (n + 1)
        )
        p_c = (1 - cc) * p_c + hsig * math.sqrt(cc * (2 - cc) * mu_eff) * y_mean

        c1a = c1 * (1 - (1 - hsig ** 2) * cc * (2 - cc))
        steps = (parents - mean_old) / sigma
        rank_mu = (weights[:, None] * steps).T @ steps
        cov = (
            (1 - c1a - cmu) * cov
            + c1 * np.outer(p_c, p_c)
            + cmu * rank_mu
        )
        sigma *= math.exp(
            min(1.0, (cs / damps) * (np.linalg.norm(p_s) / chi_n - 1))
        )

    return loop.result(x0, favourite=mean, echo=config.echo(), restarts=restarts)
