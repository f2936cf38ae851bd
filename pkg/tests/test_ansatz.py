import numpy as np
import pytest

from oracles import pauli_sum_matrix, sector_indices
from vqabench.ansatz import (
    AnsatzBuildError,
    build_ucc,
    build_vha,
    noninteracting_ground,
    prepare,
)
from vqabench.dense import half_filling_sector
from vqabench.fermions import (
    FermionOp,
    HubbardSpec,
    build_hubbard,
    excitation_generator,
)
from vqabench.statevector import basis_state, expectation_sum


def make_generators(n_modes=4, amplitudes=(0.5, -0.2, 0.1)):
    taus = [
        [(2, True), (0, False)],
        [(3, True), (1, False)],
        [(2, True), (3, True), (1, False), (0, False)],
    ]
    return [
        excitation_generator(FermionOp.from_terms([(1.0, f)]), a, n_modes)
        for f, a in zip(taus, amplitudes)
    ]


@pytest.mark.parametrize(
    "shape,layers,expected",
    [((1, 6), 5, 15), ((2, 2), 2, 6), ((2, 3), 4, 16)],
)
def test_vha_parameter_counts(shape, layers, expected):
    circuit = build_vha(build_hubbard(HubbardSpec(*shape)), layers)
    assert circuit.n_params == expected


def test_vha_factor_order_within_layer():
    circuit = build_vha(build_hubbard(HubbardSpec(2, 3)), 2)
    assert circuit.labels[:4] == ("l0:u", "l0:h1", "l0:v1", "l0:h2")
    assert circuit.labels[4:] == ("l1:u", "l1:h1", "l1:v1", "l1:h2")


def test_vha_rejects_bad_layers(hubbard_2x2):
    with pytest.raises(AnsatzBuildError):
        build_vha(hubbard_2x2, 0)


def test_prepare_zero_params_is_initial_state(hubbard_2x2):
    circuit = build_vha(hubbard_2x2, 2)
    state = prepare(circuit, np.zeros(circuit.n_params))
    assert np.max(np.abs(state.amps - circuit.initial_state.vector)) < 1e-12


def test_vha_zero_params_energy_is_noninteracting_ground_energy(hubbard_2x2):
    # oracle: diagonalize H_t in the sector by dense eigendecomposition and
    # evaluate <H> on the adiabatically resolved ground vector
    h = hubbard_2x2.total()
    circuit = build_vha(hubbard_2x2, 2)
    state = prepare(circuit, np.zeros(circuit.n_params))
    value = expectation_sum(state, h)

    vector, e0_t, degeneracy = noninteracting_ground(
        hubbard_2x2, half_filling_sector(4)
    )
    oracle = np.vdot(vector, pauli_sum_matrix(h) @ vector).real
    assert degeneracy == 4
    assert abs(e0_t - (-4.0)) < 1e-10
    assert abs(value - oracle) < 1e-10
    assert abs(value - (-2.5)) < 1e-10  # frozen from the dense oracle


def test_vha_initial_state_in_correct_sector(hubbard_2x2):
    circuit = build_vha(hubbard_2x2, 2)
    amps = circuit.initial_state.vector
    idx = sector_indices(8, 2, 2)
    outside = np.delete(np.abs(amps), idx)
    assert np.max(outside) < 1e-12


def test_ucc_build_orders_by_amplitude():
    generators = make_generators(amplitudes=(0.1, -0.5, 0.3))
    circuit = build_ucc(generators, electrons=2)
    assert circuit.n_params == 3
    # factor 0 must be the |amplitude| = 0.5 generator
    assert circuit.factors[0][0] == generators[1].paulis


def test_ucc_rejects_zero_amplitude():
    generators = make_generators(amplitudes=(0.5, 0.0, 0.1))
    with pytest.raises(AnsatzBuildError, match="zero-amplitude"):
        build_ucc(generators, electrons=2)


def test_ucc_rejects_empty():
    with pytest.raises(AnsatzBuildError):
        build_ucc([], electrons=2)


def test_ucc_zero_params_is_hartree_fock():
    circuit = build_ucc(make_generators(), electrons=2)
    state = prepare(circuit, np.zeros(3))
    hf = basis_state(4, {0, 1})
    assert np.max(np.abs(state.amps - hf.amps)) < 1e-12


def test_prepare_length_mismatch(hubbard_2x2):
    circuit = build_vha(hubbard_2x2, 2)
    with pytest.raises(ValueError, match="6"):
        prepare(circuit, np.zeros(5))


def test_particle_number_conserved_random_params(hubbard_2x2):
    from vqabench.dense import total_number_sum

    circuit = build_vha(hubbard_2x2, 2)
    number_sum = total_number_sum(8)
    rng = np.random.default_rng(0)
    for _ in range(5):
        state = prepare(circuit, rng.normal(0, 1.0, 6))
        assert abs(expectation_sum(state, number_sum) - 4.0) < 1e-9


def test_ucc_particle_number_conserved():
    from vqabench.dense import total_number_sum

    circuit = build_ucc(make_generators(), electrons=2)
    number_sum = total_number_sum(4)
    rng = np.random.default_rng(1)
    for _ in range(5):
        state = prepare(circuit, rng.normal(0, 1.0, 3))
        assert abs(expectation_sum(state, number_sum) - 2.0) < 1e-9


def test_noiseless_cost_respects_variational_bound(hubbard_2x2):
    from vqabench.analysis import exact_ground

    h = hubbard_2x2.total()
    circuit = build_vha(hubbard_2x2, 2)
    e0 = exact_ground(h).e0  # unrestricted bound holds for any state
    rng = np.random.default_rng(2)
    values = [
        expectation_sum(prepare(circuit, rng.normal(0, 2.0, 6)), h)
        for _ in range(10)
    ]
    assert min(values) >= e0 - 1e-9


def test_prepare_unitary_norm(hubbard_2x2):
    circuit = build_vha(hubbard_2x2, 3)
    rng = np.random.default_rng(3)
    state = prepare(circuit, rng.normal(0, 1.5, circuit.n_params))
    assert abs(state.norm() - 1.0) < 1e-10
