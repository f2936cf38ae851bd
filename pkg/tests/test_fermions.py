import numpy as np
import pytest

from oracles import (
    fermion_op_matrix,
    generator_matrix,
    hubbard_dense,
    pauli_sum_matrix,
)
from vqabench.fermions import (
    ExcitationGenerator,
    FermionOp,
    HubbardSpec,
    MalformedExcitationError,
    NotHermitianError,
    build_hubbard,
    excitation_generator,
    hopping,
    hubbard_fermion_op,
    jordan_wigner,
    number,
    number_pair,
    parse_generators,
    render_generators,
)
from vqabench.paulis import PauliSum, parse_pauli


def test_number_operator():
    h = jordan_wigner(number(1), 2)
    assert h.identity_coeff == 0.5
    assert [(t.coeff, t.string.letters) for t in h.terms] == [(-0.5, "IZ")]
    assert np.allclose(pauli_sum_matrix(h), fermion_op_matrix(number(1), 2))


def test_hopping_adjacent():
    h = jordan_wigner(hopping(0, 1), 2)
    expected = PauliSum.from_pairs(
        2, [(0.5, parse_pauli("XX", 2)), (0.5, parse_pauli("YY", 2))]
    )
    assert h == expected
    assert np.allclose(pauli_sum_matrix(h), fermion_op_matrix(hopping(0, 1), 2))


def test_onsite_interaction():
    op = number_pair(0, 1).scaled(2.0)
    h = jordan_wigner(op, 2)
    expected = PauliSum.from_pairs(
        2,
        [
            (-0.5, parse_pauli("ZI", 2)),
            (-0.5, parse_pauli("IZ", 2)),
            (0.5, parse_pauli("ZZ", 2)),
        ],
        identity_coeff=0.5,
    )
    assert h == expected
    assert np.allclose(pauli_sum_matrix(h), fermion_op_matrix(op, 2))


def test_non_hermitian_rejected():
    lone = FermionOp.from_terms([(1.0, [(0, True)])])
    with pytest.raises(NotHermitianError):
        jordan_wigner(lone, 2)


def test_jw_matches_dense_oracle_random_hermitian():
    # random Hermitian ops on up to 4 modes: full matrix equality
    rng = np.random.default_rng(42)
    for _ in range(25):
        n_modes = int(rng.integers(2, 5))
        terms = []
        for _ in range(int(rng.integers(1, 4))):
            coeff = float(rng.normal())
            length = int(rng.integers(1, 3))
            factors = []
            for _ in range(length):
                factors.append((int(rng.integers(0, n_modes)), bool(rng.integers(0, 2))))
            terms.append((coeff, tuple(factors)))
        op = FermionOp.from_terms(terms)
        herm = op + op.dagger()
        h = jordan_wigner(herm, n_modes)
        assert np.allclose(
            pauli_sum_matrix(h), fermion_op_matrix(herm, n_modes), atol=1e-10
        )


@pytest.mark.parametrize(
    "nx,ny,classes",
    [
        (1, 6, ("u", "h1", "h2")),
        (2, 2, ("u", "h1", "v1")),
        (2, 3, ("u", "h1", "v1", "h2")),
        (6, 1, ("u", "h1", "h2")),  # chains are chains regardless of orientation
    ],
)
def test_hubbard_bond_classes(nx, ny, classes):
    part = build_hubbard(HubbardSpec(nx, ny))
    assert part.present_classes == tuple(
        c for c in ("u", "h1", "v1", "h2", "v2") if c in classes
    )


def test_hubbard_degenerate_lattice_rejected():
    with pytest.raises(ValueError, match="degenerate"):
        HubbardSpec(1, 1)


def test_hubbard_partition_sums_to_monolithic(hubbard_2x2):
    mono = jordan_wigner(hubbard_fermion_op(hubbard_2x2.spec), 8)
    assert hubbard_2x2.total() == mono


def test_hubbard_matches_definition_oracle(hubbard_2x2_hamiltonian):
    dense = pauli_sum_matrix(hubbard_2x2_hamiltonian)
    assert np.allclose(dense, hubbard_dense(2, 2, 1.0, 2.0), atol=1e-10)


def test_hubbard_parts_disjoint_bonds():
    from vqabench.fermions import hubbard_bonds

    for spec in [HubbardSpec(2, 3), HubbardSpec(3, 3), HubbardSpec(1, 6)]:
        for name, bonds in hubbard_bonds(spec).items():
            sites = [s for bond in bonds for s in bond]
            assert len(sites) == len(set(sites)), f"{name} is not a matching"


def test_hubbard_hermitian_and_symmetric(hubbard_2x2_hamiltonian):
    dense = pauli_sum_matrix(hubbard_2x2_hamiltonian)
    assert np.max(np.abs(dense - dense.conj().T)) < 1e-12
    number_op = fermion_op_matrix(
        FermionOp.from_terms(
            [(1.0, [(j, True), (j, False)]) for j in range(8)]
        ),
        8,
    )
    sz = fermion_op_matrix(
        FermionOp.from_terms(
            [(0.5 if j % 2 == 0 else -0.5, [(j, True), (j, False)]) for j in range(8)]
        ),
        8,
    )
    assert np.max(np.abs(dense @ number_op - number_op @ dense)) < 1e-9
    assert np.max(np.abs(dense @ sz - sz @ dense)) < 1e-9


def test_single_excitation_generator():
    tau = FermionOp.from_terms([(1.0, [(2, True), (0, False)])])
    gen = excitation_generator(tau, amplitude=0.3, n_modes=4)
    assert gen.amplitude == 0.3
    letters = {t.string.letters: t.coeff for t in gen.paulis.terms}
    assert set(letters) == {"XZYI", "YZXI"}
    assert abs(abs(letters["XZYI"]) - 0.5) < 1e-12
    # anti-Hermiticity on the dense oracle
    g = generator_matrix(gen.paulis)
    assert np.max(np.abs(g + g.conj().T)) < 1e-12
    anti = tau + tau.dagger().scaled(-1.0)
    assert np.allclose(g, fermion_op_matrix(anti, 4))


def test_double_excitation_generator():
    tau = FermionOp.from_terms([(1.0, [(2, True), (3, True), (1, False), (0, False)])])
    gen = excitation_generator(tau, amplitude=-0.05, n_modes=4)
    assert gen.paulis.n_terms == 8
    assert all(abs(abs(t.coeff) - 0.125) < 1e-12 for t in gen.paulis.terms)
    g = generator_matrix(gen.paulis)
    assert np.max(np.abs(g + g.conj().T)) < 1e-12
    anti = tau + tau.dagger().scaled(-1.0)
    assert np.allclose(g, fermion_op_matrix(anti, 4))


def test_generator_conserves_particle_number():
    number_full = fermion_op_matrix(
        FermionOp.from_terms([(1.0, [(j, True), (j, False)]) for j in range(4)]), 4
    )
    for factors in [
        [(2, True), (0, False)],
        [(3, True), (1, False)],
        [(2, True), (3, True), (1, False), (0, False)],
    ]:
        tau = FermionOp.from_terms([(1.0, factors)])
        gen = excitation_generator(tau, 1.0, 4)
        g = generator_matrix(gen.paulis)
        assert np.max(np.abs(g @ number_full - number_full @ g)) < 1e-10


def test_malformed_excitation_rejected():
    with pytest.raises(MalformedExcitationError):
        excitation_generator(
            FermionOp.from_terms([(1.0, [(0, False), (2, True)])]), 1.0, 4
        )
    with pytest.raises(MalformedExcitationError):
        excitation_generator(
            FermionOp.from_terms([(1.0, [(0, True), (0, False)])]), 1.0, 4
        )


def test_generator_file_roundtrip():
    taus = [
        ([(2, True), (0, False)], 0.5),
        ([(3, True), (1, False)], -0.75),
        ([(2, True), (3, True), (1, False), (0, False)], 0.1),
    ]
    generators = [
        excitation_generator(FermionOp.from_terms([(1.0, f)]), a, 4)
        for f, a in taus
    ]
    text = render_generators(generators, n_qubits=4, electrons=2)
    parsed, n_qubits, electrons = parse_generators(text)
    assert (n_qubits, electrons) == (4, 2)
    # blocks come back sorted by descending |amplitude|
    assert [g.amplitude for g in parsed] == [-0.75, 0.5, 0.1]
    by_amp = {g.amplitude: g for g in generators}
    for g in parsed:
        assert g.paulis == by_amp[g.amplitude].paulis
    assert render_generators(parsed, 4, 2) == text
