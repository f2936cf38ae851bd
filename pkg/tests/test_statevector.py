import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import pauli_matrix, pauli_sum_matrix
from vqabench.paulis import PauliSum, parse_pauli
from vqabench.statevector import (
    StateVector,
    apply_pauli_exponential,
    basis_state,
    expectation,
    expectation_sum,
)


def random_state(n, seed):
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    amps /= np.linalg.norm(amps)
    return StateVector(n, amps)


def test_basis_state_vacuum():
    s = basis_state(2, set())
    assert np.array_equal(s.amps, [1, 0, 0, 0])


def test_basis_state_qubit0():
    s = basis_state(2, {0})
    assert s.amps[0b01] == 1.0
    assert np.count_nonzero(s.amps) == 1


def test_basis_state_hf_two_electrons():
    s = basis_state(4, {0, 1})
    assert s.amps[0b0011] == 1.0


def test_basis_state_out_of_range():
    with pytest.raises(IndexError):
        basis_state(2, {5})


def test_exponential_zero_angle_is_identity():
    s = random_state(3, 1)
    before = s.amps.copy()
    apply_pauli_exponential(s, parse_pauli("XYZ", 3), 0.0)
    assert np.array_equal(s.amps, before)


def test_exponential_pi_half_x():
    s = basis_state(1, set())
    apply_pauli_exponential(s, parse_pauli("X", 1), np.pi / 2)
    # cos(pi/2) I + i sin(pi/2) X = iX, so |0> -> i|1>
    assert abs(s.amps[1] - 1j) < 1e-12
    assert abs(s.amps[0]) < 1e-12


def test_exponential_diagonal_phase():
    theta = 0.37
    s = basis_state(1, set())
    apply_pauli_exponential(s, parse_pauli("Z", 1), theta)
    assert abs(s.amps[0] - np.exp(1j * theta)) < 1e-12


def test_expectation_z_on_zero():
    assert expectation(basis_state(1, set()), parse_pauli("Z", 1)) == 1.0


def test_expectation_x_eigenstates():
    # exp(-i pi/4 Y)|0> = |+>; the +pi/4 rotation lands on |-> since Y|0> = i|1>
    plus = basis_state(1, set())
    apply_pauli_exponential(plus, parse_pauli("Y", 1), -np.pi / 4)
    assert abs(expectation(plus, parse_pauli("X", 1)) - 1.0) < 1e-10
    minus = basis_state(1, set())
    apply_pauli_exponential(minus, parse_pauli("Y", 1), np.pi / 4)
    assert abs(expectation(minus, parse_pauli("X", 1)) + 1.0) < 1e-10


@given(st.integers(0, 10_000), st.text("IXYZ", min_size=3, max_size=3))
@settings(max_examples=150, deadline=None)
def test_expectation_matches_matrix_oracle(seed, letters):
    state = random_state(3, seed)
    p = parse_pauli(letters, 3)
    oracle = np.vdot(state.amps, pauli_matrix(letters) @ state.amps).real
    assert abs(expectation(state, p) - oracle) < 1e-10


@given(st.integers(0, 10_000), st.floats(-2.0, 2.0), st.text("IXYZ", min_size=3, max_size=3))
@settings(max_examples=100, deadline=None)
def test_exponential_matches_matrix_oracle(seed, angle, letters):
    state = random_state(3, seed)
    expected = (
        np.cos(angle) * np.eye(8) + 1j * np.sin(angle) * pauli_matrix(letters)
    ) @ state.amps
    apply_pauli_exponential(state, parse_pauli(letters, 3), angle)
    assert np.max(np.abs(state.amps - expected)) < 1e-12


def test_expectation_sum_identity_only():
    h = PauliSum(2, identity_coeff=0.75)
    assert expectation_sum(basis_state(2, {1}), h) == 0.75


def test_expectation_sum_arithmetic():
    h = PauliSum.from_pairs(1, [(0.5, parse_pauli("Z", 1))], identity_coeff=0.25)
    assert abs(expectation_sum(basis_state(1, {0}), h) - (-0.25)) < 1e-12


def test_expectation_sum_matches_oracle_random():
    rng = np.random.default_rng(3)
    pairs = [
        (rng.normal(), parse_pauli("".join(rng.choice(list("IXYZ"), 3)), 3))
        for _ in range(6)
    ]
    h = PauliSum.from_pairs(3, pairs, identity_coeff=rng.normal())
    state = random_state(3, 17)
    oracle = np.vdot(state.amps, pauli_sum_matrix(h) @ state.amps).real
    assert abs(expectation_sum(state, h) - oracle) < 1e-10


def test_norm_preserved_under_long_sequences():
    state = random_state(4, 5)
    rng = np.random.default_rng(6)
    for _ in range(200):
        letters = "".join(rng.choice(list("IXYZ"), 4))
        apply_pauli_exponential(state, parse_pauli(letters, 4), rng.normal())
    assert abs(state.norm() - 1.0) < 1e-10


def test_exponential_reversible():
    state = random_state(4, 8)
    before = state.amps.copy()
    p = parse_pauli("XZYX", 4)
    apply_pauli_exponential(state, p, 0.813)
    apply_pauli_exponential(state, p, -0.813)
    assert np.max(np.abs(state.amps - before)) < 1e-10


def test_variational_bound(hubbard_2x2_hamiltonian):
    h = hubbard_2x2_hamiltonian
    from vqabench.analysis import exact_ground

    e0 = exact_ground(h).e0
    for seed in range(20):
        state = random_state(h.n_qubits, seed)
        assert expectation_sum(state, h) >= e0 - 1e-9


def test_hubbard_ground_energy_matches_diagonalizer(hubbard_2x2_hamiltonian):
    from vqabench.analysis import exact_ground
    from vqabench.dense import half_filling_sector

    solution = exact_ground(hubbard_2x2_hamiltonian, half_filling_sector(4))
    value = expectation_sum(solution.ground_vector, hubbard_2x2_hamiltonian)
    assert abs(value - solution.e0) < 1e-9
