"""Parameterized circuits: trotterized UCC and the layered Hubbard VHA.

A circuit is an ordered list of factors ``exp(i theta_k w_j P_j)``
grouped per parameter; the first listed factor acts first on the
initial state. UCC factors come from amplitude-ordered excitation
generators (weights are the imaginary parts g_k of i g_k P_k); VHA
factors exponentiate the real bond-class Hamiltonians directly. Both
reduce to the same per-term exponential product, and within a VHA bond
class the terms commute, so that product is exact there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from vqabench.dense import (
    Sector,
    embed_sector_vector,
    half_filling_sector,
    pauli_sum_matrix,
)
from vqabench.fermions import ExcitationGenerator, HubbardPartition
from vqabench.paulis import PauliSum
from vqabench.statevector import StateVector, basis_state, from_amplitudes

_DEG_ATOL = 1e-8


@dataclass(frozen=True)
class InitialState:
    """HF occupation set, or an explicit prepared vector with provenance."""

    occupied: frozenset[int] | None = None
    vector: np.ndarray | None = None
    description: str = ""
    degeneracy: int = 1

    def build(self, n_qubits: int) -> StateVector:
        if self.occupied is not None:
            return basis_state(n_qubits, self.occupied)
        return from_amplitudes(n_qubits, self.vector)


@dataclass(frozen=True)
class AnsatzCircuit:
    n_qubits: int
    initial_state: InitialState
    factors: tuple[tuple[PauliSum, int], ...]
    n_params: int
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        used = {index for _, index in self.factors}
        if used and (min(used) < 0 or max(used) >= self.n_params):
            raise ValueError("factor parameter index out of range")
        if used != set(range(self.n_params)):
            raise ValueError("every parameter index must be used at least once")


class AnsatzBuildError(ValueError):
    pass


def build_ucc(generators: list[ExcitationGenerator], electrons: int) -> AnsatzCircuit:
    """One parameter per generator, ordered by descending |amplitude|.

    The initial state is the Hartree-Fock determinant, modes 0..k-1
    occupied. Generators with zero amplitude are rejected: they are
    filtered out before export, so one here means a malformed file.
    """
    if not generators:
        raise AnsatzBuildError("no generators: the circuit would have no parameters")
    for gen in generators:
        if gen.amplitude == 0.0:
            raise AnsatzBuildError("zero-amplitude generator present")
    ordered = sorted(generators, key=lambda g: -abs(g.amplitude))
    n_qubits = ordered[0].paulis.n_qubits
    factors = tuple((gen.paulis, i) for i, gen in enumerate(ordered))
    labels = tuple(f"g{i}" for i in range(len(ordered)))
    initial = InitialState(
        occupied=frozenset(range(electrons)),
        description=f"hartree-fock k={electrons}",
    )
    return AnsatzCircuit(n_qubits, initial, factors, len(ordered), labels)


def build_vha(partition: HubbardPartition, layers: int) -> AnsatzCircuit:
    """Layered exponentials of the bond classes, order U, h1, v1, h2, v2.

    The initial state is the ground vector of the hopping part alone,
    diagonalized inside the half-filling sector. Degenerate hopping
    ground spaces (the 2x2 lattice, notably) are resolved adiabatically:
    first- and second-order degenerate perturbation theory in the
    interaction picks the U -> 0+ continuation of the interacting
    ground state. An arbitrary eigencolumn instead starts the circuit
    from a vector the shallow ansatz cannot rotate to the ground state.
    """
    if layers < 1:
        raise AnsatzBuildError(f"layers must be >= 1, got {layers}")
    classes = partition.present_classes
    ordered = [name for name in ("u", "h1", "v1", "h2", "v2") if name in classes]
    if not ordered:
        raise AnsatzBuildError("empty partition")
    factors = []
    labels = []
    index = 0
    for layer in range(layers):
        for name in ordered:
            factors.append((partition.h_parts[name], index))
            labels.append(f"l{layer}:{name}")
            index += 1
    sector = hubbard_sector(partition)
    vector, e0, degeneracy = noninteracting_ground(partition, sector)
    initial = InitialState(
        vector=vector,
        description=(
            f"ground(H_t) sector {sector.label()} "
            f"e0={e0:.12g} degeneracy={degeneracy}"
        ),
        degeneracy=degeneracy,
    )
    return AnsatzCircuit(
        partition.n_qubits, initial, tuple(factors), index, tuple(labels)
    )


def noninteracting_ground(
    partition: HubbardPartition, sector: Sector
) -> tuple[np.ndarray, float, int]:
    """Adiabatic ground vector of the hopping part inside a sector.

    Returns (full-space amplitudes, hopping ground energy, hopping
    ground degeneracy). Ties are resolved by diagonalizing the
    interaction inside the degenerate manifold, then its second-order
    effective operator, then by the first remaining column.
    """
    n_qubits = partition.n_qubits
    m_t = pauli_sum_matrix(partition.hopping_total(), sector).toarray()
    evals, evecs = np.linalg.eigh(m_t)
    e0 = float(evals[0])
    degeneracy = int(np.sum(evals < e0 + _DEG_ATOL))
    if degeneracy == 1 or "u" not in partition.h_parts:
        block = evecs[:, 0]
        return embed_sector_vector(n_qubits, sector, block), e0, degeneracy
    m_u = pauli_sum_matrix(partition.h_parts["u"], sector).toarray()
    manifold = evecs[:, :degeneracy]
    w1, u1 = np.linalg.eigh(manifold.conj().T @ m_u @ manifold)
    d1 = int(np.sum(w1 < w1[0] + _DEG_ATOL))
    resolved = manifold @ u1[:, :d1]
    if d1 > 1:
        rest = evecs[:, degeneracy:]
        coupling = rest.conj().T @ m_u @ resolved
        weights = 1.0 / (e0 - evals[degeneracy:])
        second = coupling.conj().T @ (weights[:, None] * coupling)
        _, u2 = np.linalg.eigh(second)
        block = resolved @ u2[:, 0]
    else:
        block = resolved[:, 0]
    return embed_sector_vector(n_qubits, sector, block), e0, degeneracy


def hubbard_sector(partition: HubbardPartition) -> Sector:
    spec = partition.spec
    if spec.n_particles:
        return Sector(n_particles=spec.n_particles)
    return half_filling_sector(spec.n_sites)


def prepare(circuit: AnsatzCircuit, params: np.ndarray) -> StateVector:
    """Apply the circuit at the given angles to a fresh initial state."""
    from vqabench.statevector import apply_pauli_exponential

    values = np.asarray(params, dtype=float)
    if values.shape != (circuit.n_params,):
        raise ValueError(
            f"expected {circuit.n_params} parameters, got shape {values.shape}"
        )
    state = circuit.initial_state.build(circuit.n_qubits)
    for generator, index in circuit.factors:
        theta = float(values[index])
        if theta == 0.0:
            continue
        for term in generator.terms:
            apply_pauli_exponential(state, term.string, theta * term.coeff)
        if generator.identity_coeff != 0.0:
            state.amps *= np.exp(1j * theta * generator.identity_coeff)
    return state
