import numpy as np
import pytest

from vqabench.paulis import PauliSum, parse_pauli
from vqabench.sampling import (
    BudgetExhausted,
    NoisyValue,
    ShotLedger,
    ShotRng,
    noisy_cost,
    sample_expectation,
    variance_bound,
)
from vqabench.statevector import StateVector, basis_state, expectation_sum


def random_state(n, seed):
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    amps /= np.linalg.norm(amps)
    return StateVector(n, amps)


def stream():
    return ShotRng(1234)


def test_sample_expectation_degenerate_plus_one():
    rng = stream().term_stream(0, 0)
    for shots in (1, 10, 100):
        assert sample_expectation(1.0, shots, rng) == 1.0


def test_sample_expectation_degenerate_minus_one():
    rng = stream().term_stream(0, 0)
    for shots in (1, 10, 100):
        assert sample_expectation(-1.0, shots, rng) == -1.0


def test_sample_expectation_out_of_range():
    with pytest.raises(ValueError):
        sample_expectation(1.5, 10, stream().term_stream(0, 0))


def test_sample_expectation_moments():
    # binomial law: mean 0, variance (1 - mu^2)/M at mu = 0
    shots = 10_000
    draws = 10_000
    rng = stream()
    samples = np.array([
        sample_expectation(0.0, shots, rng.term_stream(i, 0)) for i in range(draws)
    ])
    tolerance = 4.0 / np.sqrt(shots * draws)
    assert abs(samples.mean()) < tolerance
    assert abs(samples.var() - 1.0 / shots) < 0.05 / shots


def test_ledger_charges_and_refuses():
    ledger = ShotLedger(250)
    ledger.charge(100)
    ledger.charge(100)
    assert ledger.spent == 200
    assert ledger.remaining == 50
    with pytest.raises(BudgetExhausted):
        ledger.charge(100)
    assert ledger.spent == 200  # refusal happens before any debit


def test_noisy_cost_identity_only():
    h = PauliSum(2, identity_coeff=0.75)
    ledger = ShotLedger(100)
    value = noisy_cost(basis_state(2, set()), h, 10, ledger, stream())
    assert value == NoisyValue(0.75, 10, 0.0)
    assert ledger.spent == 10


def test_noisy_cost_eigenstate_exact():
    h = PauliSum.from_pairs(1, [(1.0, parse_pauli("Z", 1))])
    value = noisy_cost(basis_state(1, set()), h, 100, ShotLedger(100), stream())
    assert value.value == 1.0
    assert value.variance_estimate == 0.0


def test_noisy_cost_budget_refused_before_sampling():
    h = PauliSum.from_pairs(1, [(1.0, parse_pauli("Z", 1))])
    ledger = ShotLedger(50)
    rng = stream()
    with pytest.raises(BudgetExhausted):
        noisy_cost(basis_state(1, set()), h, 100, ledger, rng)
    assert ledger.spent == 0
    assert rng.eval_index == 0


def test_noisy_cost_variance_formula():
    h = PauliSum.from_pairs(
        2, [(0.5, parse_pauli("XI", 2)), (-1.5, parse_pauli("ZZ", 2))]
    )
    state = random_state(2, 9)
    from vqabench.statevector import expectation

    shots = 400
    result = noisy_cost(state, h, shots, ShotLedger(shots), stream())
    expected = sum(
        t.coeff ** 2 * (1 - expectation(state, t.string) ** 2) / shots
        for t in h.terms
    )
    assert abs(result.variance_estimate - expected) < 1e-15


def test_noisy_cost_unbiased_and_variance_matches():
    h = PauliSum.from_pairs(
        3,
        [
            (0.7, parse_pauli("XYI", 3)),
            (-0.4, parse_pauli("ZZI", 3)),
            (0.25, parse_pauli("IXZ", 3)),
        ],
        identity_coeff=0.3,
    )
    state = random_state(3, 21)
    exact = expectation_sum(state, h)
    shots = 200
    repetitions = 10_000
    rng = stream()
    values = np.empty(repetitions)
    estimate = None
    for i in range(repetitions):
        res = noisy_cost(state, h, shots, ShotLedger(shots), rng)
        values[i] = res.value
        estimate = res.variance_estimate
    standard_error = np.sqrt(estimate / repetitions)
    assert abs(values.mean() - exact) < 4 * standard_error
    assert abs(values.var() - estimate) < 0.1 * estimate


def test_determinism_bit_exact():
    h = PauliSum.from_pairs(
        2, [(0.5, parse_pauli("XY", 2)), (0.8, parse_pauli("ZI", 2))]
    )
    state = random_state(2, 5)

    def run():
        rng = ShotRng(777)
        return [
            noisy_cost(state, h, 50, ShotLedger(10_000), rng).value
            for _ in range(20)
        ]

    assert run() == run()


def test_substreams_independent_of_call_order():
    rng = ShotRng(42)
    a = rng.term_stream(3, 7).binomial(100, 0.5)
    b = rng.term_stream(2, 1).binomial(100, 0.5)
    rng2 = ShotRng(42)
    b2 = rng2.term_stream(2, 1).binomial(100, 0.5)
    a2 = rng2.term_stream(3, 7).binomial(100, 0.5)
    assert (a, b) == (a2, b2)


def test_ledger_conservation_over_run():
    h = PauliSum.from_pairs(1, [(1.0, parse_pauli("X", 1))])
    ledger = ShotLedger(1000)
    rng = stream()
    state = basis_state(1, set())
    spent = 0
    with pytest.raises(BudgetExhausted):
        for _ in range(100):
            noisy_cost(state, h, 150, ledger, rng)
            spent += 150
    assert ledger.spent == spent == 900


def test_variance_bound_empty():
    assert variance_bound(PauliSum(3), 100) == 0.0


def test_variance_bound_single_term():
    h = PauliSum.from_pairs(1, [(2.0, parse_pauli("Z", 1))])
    assert variance_bound(h, 100) == pytest.approx(0.04)


def test_variance_bound_dominates_estimate():
    h = PauliSum.from_pairs(
        3,
        [
            (0.7, parse_pauli("XYI", 3)),
            (-0.4, parse_pauli("ZZZ", 3)),
            (1.1, parse_pauli("IIX", 3)),
        ],
    )
    shots = 64
    bound = variance_bound(h, shots)
    rng = stream()
    for seed in range(100):
        state = random_state(3, seed)
        estimate = noisy_cost(state, h, shots, ShotLedger(shots), rng).variance_estimate
        assert estimate <= bound + 1e-15
