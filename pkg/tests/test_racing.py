import numpy as np
import pytest

from vqabench.racing import (
    ALPHA,
    Dimension,
    ParamSpace,
    _friedman_separation,
    race,
    sample_config,
)

SPACE_A = ParamSpace((Dimension("a", "real", 0.01, 2.0),))


def noisy_parabola(config, instance_seed):
    rng = np.random.default_rng(instance_seed)
    return (config["a"] - 0.7) ** 2 + rng.normal(0.0, 0.01)


def test_dimension_validation():
    with pytest.raises(ValueError):
        Dimension("x", "real", 1.0, 1.0)
    with pytest.raises(ValueError):
        Dimension("x", "categorical", 0.0, 1.0)


def test_sample_uniform_within_bounds():
    space = ParamSpace((
        Dimension("population", "integer", 30, 130),
        Dimension("gamma", "real", 0.0, 1.0 / 6.0),
    ))
    rng = np.random.default_rng(0)
    draws = [sample_config(space, rng) for _ in range(10_000)]
    pops = [d["population"] for d in draws]
    gammas = [d["gamma"] for d in draws]
    assert min(pops) >= 30 and max(pops) <= 130
    assert all(p == int(p) for p in pops)
    assert min(gammas) >= 0.0 and max(gammas) <= 1.0 / 6.0


def test_sample_around_elite_clamps_integers():
    space = ParamSpace((Dimension("population", "integer", 30, 130),))
    rng = np.random.default_rng(1)
    draws = [
        sample_config(space, rng, around={"population": 113}, spread=0.005)
        for _ in range(500
        )
    ]
    values = [d["population"] for d in draws]
    assert all(30 <= v <= 130 for v in values)
    assert max(abs(v - 113) for v in values) <= 3


def test_sample_around_edge_stays_in_bounds():
    space = ParamSpace((Dimension("g", "real", 0.0, 1.0 / 6.0),))
    rng = np.random.default_rng(2)
    draws = [
        sample_config(space, rng, around={"g": 1.0 / 6.0}, spread=0.5)
        for _ in range(2_000)
    ]
    assert all(0.0 <= d["g"] <= 1.0 / 6.0 for d in draws)


def test_race_recovers_synthetic_optimum():
    result = race(SPACE_A, noisy_parabola, budget=500, seed=1)
    assert result.evaluations_used <= 500
    assert result.elites
    assert abs(result.elites[0].values["a"] - 0.7) < 0.1


def test_race_single_config_returned_unchanged():
    result = race(
        SPACE_A, noisy_parabola, budget=20, seed=4,
        initial_configs=[{"a": 0.6}], n_new=0,
    )
    assert len(result.elites) == 1
    assert result.elites[0].values == {"a": 0.6}
    assert result.evaluations_used == 20  # budget spent on repetitions alone


def test_race_eliminates_dominated_config_at_first_legal_round():
    def dominated(config, instance_seed):
        rng = np.random.default_rng(instance_seed)
        base = 0.0 if config["a"] < 1.0 else 10.0  # 10 sigma apart
        return base + rng.normal(0.0, 1.0)

    result = race(
        SPACE_A, dominated, budget=60, seed=3,
        initial_configs=[{"a": 0.5}, {"a": 1.5}], n_new=0,
    )
    eliminations = [e for g in result.generations for e in g.eliminations]
    assert eliminations
    first = eliminations[0]
    assert first.round_index == 2  # the minimum two-instance round
    assert first.config == {"a": 1.5}
    assert first.friedman_p <= ALPHA


def test_race_budget_ten_gives_five_configs_one_round():
    seen = set()
    rounds = []

    def spy(config, instance_seed):
        seen.add(config["a"])
        rounds.append(instance_seed)
        return config["a"]

    result = race(SPACE_A, spy, budget=10, initial_reps=2, seed=8)
    assert len(result.generations[0].configs) == 5
    assert result.evaluations_used == 10
    assert len(set(rounds)) == 2  # exactly the two opening instances


def test_race_budget_never_exceeded():
    calls = 0

    def counting(config, instance_seed):
        nonlocal calls
        calls += 1
        return noisy_parabola(config, instance_seed)

    result = race(SPACE_A, counting, budget=137, seed=6)
    assert calls == result.evaluations_used <= 137


def test_race_deterministic():
    r1 = race(SPACE_A, noisy_parabola, budget=200, seed=9)
    r2 = race(SPACE_A, noisy_parabola, budget=200, seed=9)
    assert [e.values for e in r1.elites] == [e.values for e in r2.elites]
    assert [e.mean_score for e in r1.elites] == [e.mean_score for e in r2.elites]


def test_race_objective_failure_scored_worst():
    def sometimes_broken(config, instance_seed):
        if config["a"] > 1.9:
            raise RuntimeError("boom")
        return noisy_parabola(config, instance_seed)

    result = race(
        SPACE_A, sometimes_broken, budget=40, seed=5,
        initial_configs=[{"a": 0.7}, {"a": 1.95}], n_new=0,
    )
    assert result.elites[0].values == {"a": 0.7}


def test_race_emitted_configs_satisfy_bounds():
    result = race(SPACE_A, noisy_parabola, budget=300, seed=12)
    for report in result.generations:
        for config in report.configs:
            assert 0.01 <= config["a"] <= 2.0


def test_friedman_separation_requires_significance():
    rng = np.random.default_rng(0)
    matrix = rng.normal(size=(4, 3))  # pure noise: rarely separable
    p, rank_sums, critical = _friedman_separation(matrix)
    assert 0.0 <= p <= 1.0
    assert rank_sums.shape == (3,)
    # identical columns: no separation possible
    tied = np.tile(rng.normal(size=(5, 1)), (1, 3))
    p_tied, _, critical_tied = _friedman_separation(tied)
    assert p_tied == 1.0 and critical_tied == np.inf


def test_friedman_perfectly_consistent_rankings():
    matrix = np.array([[1.0, 2.0, 3.0], [1.1, 2.1, 3.1], [0.9, 1.9, 2.9]])
    p, rank_sums, critical = _friedman_separation(matrix)
    assert p <= ALPHA
    assert critical == 0.0  # any rank-sum gap separates
