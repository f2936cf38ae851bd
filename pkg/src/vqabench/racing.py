"""Iterated racing for optimizer hyperparameter configuration.

Candidates race on shared instance seeds; after each config has at
least ``initial_reps`` scores, a Friedman rank test (Conover's F form)
at alpha = 0.05 decides whether the field separates, and candidates
whose rank sum sits significantly above the leader's are dropped. When
the race ends, survivors seed the next generation of candidates drawn
from truncated normals whose width halves each generation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats

ALPHA = 0.05


@dataclass(frozen=True)
class Dimension:
    name: str
    kind: str  # "real" | "integer"
    lower: float
    upper: float

    def __post_init__(self):
        if self.kind not in ("real", "integer"):
            raise ValueError(f"kind must be 'real' or 'integer', got {self.kind!r}")
        if not self.lower < self.upper:
            raise ValueError(
                f"dimension {self.name}: lower must be < upper, "
                f"got [{self.lower}, {self.upper}]"
            )

    def clamp(self, value: float) -> float:
        if self.kind == "integer":
            return float(int(min(self.upper, max(self.lower, round(value)))))
        return float(min(self.upper, max(self.lower, value)))


@dataclass(frozen=True)
class ParamSpace:
    dimensions: tuple[Dimension, ...]

    def names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.dimensions)


def sample_config(
    space: ParamSpace,
    rng: np.random.Generator,
    around: dict | None = None,
    spread: float = 0.5,
) -> dict:
    """Uniform draw, or truncated normal centered on an elite config.

    ``spread`` is the normal's standard deviation in units of each
    dimension's range; integer dimensions are rounded then clamped.
    """
    config = {}
    for dim in space.dimensions:
        if around is None:
            value = rng.uniform(dim.lower, dim.upper)
        else:
            center = float(around[dim.name])
            scale = spread * (dim.upper - dim.lower)
            a = (dim.lower - center) / scale
            b = (dim.upper - center) / scale
            value = float(stats.truncnorm.ppf(rng.uniform(), a, b, loc=center, scale=scale))
        config[dim.name] = dim.clamp(value)
    return config


@dataclass
class Elimination:
    generation: int
    round_index: int
    config: dict
    friedman_p: float


@dataclass
class GenerationReport:
    generation: int
    configs: list[dict]
    scores: list[list[float]]  # per config, per instance
    eliminations: list[Elimination]
    instance_seeds: list[int]


@dataclass
class EliteConfig:
    values: dict
    mean_score: float
    n_scores: int


@dataclass
class RaceState:
    alive: list[int]
    generation: int
    evaluations_used: int
    budget: int


@dataclass
class RaceResult:
    elites: list[EliteConfig]
    generations: list[GenerationReport]
    evaluations_used: int
    budget: int


def _friedman_separation(matrix: np.ndarray) -> tuple[float, np.ndarray, float]:
    """(p-value, rank sums, critical rank-sum difference) for one block design.

    Conover's F form of the Friedman statistic with average ranks; the
    critical difference is the post-hoc pairwise t threshold used by
    racing to drop candidates against the current leader.
    """
    n, k = matrix.shape
    ranks = np.vstack([stats.rankdata(row) for row in matrix])
    rank_sums = ranks.sum(axis=0)
    a1 = float((ranks ** 2).sum())
    c1 = n * k * (k + 1) ** 2 / 4.0
    if a1 - c1 <= 0:  # every instance ranked all configs identically equal
        return 1.0, rank_sums, np.inf
    t1 = (k - 1) * float(((rank_sums - n * (k + 1) / 2.0) ** 2).sum()) / (a1 - c1)
    dof2 = (n - 1) * (k - 1)
    denominator = n * (k - 1) - t1
    if denominator <= 1e-12:
        # perfectly consistent rankings: maximal evidence of separation
        return 0.0, rank_sums, 0.0
    t2 = (n - 1) * t1 / denominator
    p_value = float(stats.f.sf(t2, k - 1, dof2))
    spread = 2.0 * n * (1.0 - t1 / (n * (k - 1))) * (a1 - c1) / dof2
    critical = float(stats.t.ppf(1 - ALPHA / 2.0, dof2)) * float(np.sqrt(max(spread, 0.0)))
    return p_value, rank_sums, critical


def race(
    space: ParamSpace,
    objective,
    budget: int = 500,
    initial_reps: int = 2,
    seed: int = 0,
    n_elite: int = 5,
    n_new: int = 10,
    initial_configs: list[dict] | None = None,
    max_generations: int = 1000,
) -> RaceResult:
    """Iterated race; ``objective(config, instance_seed) -> score`` (lower wins).

    The first generation holds ``n_elite + n_new`` uniform candidates,
    shrunk to ``budget // initial_reps`` when the budget cannot fund the
    opening round. A failed objective scores worst for that instance.
    Total objective invocations never exceed ``budget``.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    instance_counter = 0
    used = 0
    generations: list[GenerationReport] = []
    elites: list[EliteConfig] = []

    def next_instance_seed() -> int:
        nonlocal instance_counter
        value = seed * 100003 + instance_counter
        instance_counter += 1
        return value

    def evaluate(config: dict, instance_seed: int) -> float:
        nonlocal used
        used += 1
        try:
            return float(objective(config, instance_seed))
        except Exception:  # scored as worst; the race continues
            return float("inf")

    spread = 0.5
    for generation in range(max_generations):
        if generation == 0:
            if initial_configs is not None:
                candidates = [dict(c) for c in initial_configs]
            else:
                count = min(n_elite + n_new, max(1, budget // max(1, initial_reps)))
                candidates = [sample_config(space, rng) for _ in range(count)]
        else:
            candidates = [dict(e.values) for e in elites]
            for i in range(n_new):
                around = elites[i % len(elites)].values if elites else None
                candidates.append(sample_config(space, rng, around, spread))
        if not candidates:
            break
        if used + len(candidates) * initial_reps > budget:
            break

        alive = list(range(len(candidates)))
        scores: list[list[float]] = [[] for _ in candidates]
        report = GenerationReport(generation, candidates, scores, [], [])
        generations.append(report)
        round_index = 0
        while used + len(alive) <= budget:
            if round_index >= initial_reps and len(alive) <= n_elite:
                break
            instance_seed = next_instance_seed()
            report.instance_seeds.append(instance_seed)
            for index in alive:
                scores[index].append(evaluate(candidates[index], instance_seed))
            round_index += 1
            if round_index >= initial_reps and len(alive) > 1:
                matrix = np.array([scores[i] for i in alive])  # configs x instances
                p_value, rank_sums, critical = _friedman_separation(matrix.T)
                if p_value <= ALPHA:
                    leader = int(np.argmin(rank_sums))
                    keep = []
                    for pos, index in enumerate(alive):
                        if pos != leader and rank_sums[pos] - rank_sums[leader] > critical:
                            report.eliminations.append(
                                Elimination(generation, round_index, candidates[index], p_value)
                            )
                        else:
                            keep.append(index)
                    alive = keep

        ranked = sorted(
            alive,
            key=lambda i: (float(np.mean(scores[i])) if scores[i] else float("inf"), i),
        )
        elites = [
            EliteConfig(dict(candidates[i]), float(np.mean(scores[i])), len(scores[i]))
            for i in ranked[:n_elite]
            if scores[i]
        ]
        spread /= 2.0
        minimum_next = (len(elites) + n_new) * initial_reps
        if used + minimum_next > budget:
            break

    elites.sort(key=lambda e: e.mean_score)
    return RaceResult(elites, generations, used, budget)
