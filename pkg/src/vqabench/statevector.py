"""Dense statevector simulation for up to ~14 qubits.

Basis convention: qubit ``q`` is bit ``q`` of the amplitude index
(little-endian). Pauli exponentials are applied exactly through the
cos/sin pairing of amplitudes connected by the string's X mask; no gate
decomposition is involved.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from vqabench.paulis import _PHASES, PauliSizeError, PauliString, PauliSum

NORM_TOL = 1e-10


class StateVector:
    """Mutable complex amplitude buffer for one ``n_qubits`` register."""

    __slots__ = ("n_qubits", "amps")

    def __init__(self, n_qubits: int, amps: np.ndarray):
        if amps.shape != (1 << n_qubits,):
            raise ValueError(
                f"amplitude buffer has shape {amps.shape}, expected {(1 << n_qubits,)}"
            )
        self.n_qubits = n_qubits
        self.amps = np.ascontiguousarray(amps, dtype=np.complex128)

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amps.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def fidelity(self, other: "StateVector") -> float:
        return float(abs(np.vdot(self.amps, other.amps)) ** 2)


def basis_state(n_qubits: int, occupied: set[int] | frozenset[int]) -> StateVector:
    """Computational basis state with the listed qubits in |1>."""
    index = 0
    for q in occupied:
        if not 0 <= q < n_qubits:
            raise IndexError(f"qubit {q} out of range for {n_qubits} qubits")
        index |= 1 << q
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(n_qubits, amps)


def from_amplitudes(n_qubits: int, amps: np.ndarray) -> StateVector:
    state = StateVector(n_qubits, np.array(amps, dtype=np.complex128))
    n = state.norm()
    if abs(n - 1.0) > 1e-8:
        raise ValueError(f"amplitudes are not normalized (norm {n})")
    return state


@lru_cache(maxsize=4096)
def _pauli_action(n_qubits: int, x: int, z: int) -> tuple[np.ndarray, np.ndarray]:
    """(source indices, phases) such that (P psi)[b] = phases[b] * psi[src[b]]."""
    dim = 1 << n_qubits
    indices = np.arange(dim, dtype=np.intp)
    src = indices ^ x
    # P|b> = i^{|x&z|} (-1)^{|z & b|} |b ^ x>, read off at target index b.
    signs = 1.0 - 2.0 * (np.bitwise_count(src & z) & 1)
    phases = _PHASES[(x & z).bit_count() % 4] * signs.astype(np.complex128)
    return src, phases


def apply_pauli(state: StateVector, p: PauliString) -> np.ndarray:
    """Return P|psi> as a fresh amplitude array (state untouched)."""
    _check_size(state, p)
    src, phases = _pauli_action(state.n_qubits, p.x, p.z)
    return phases * state.amps[src]


def apply_pauli_exponential(
    state: StateVector, p: PauliString, angle: float
) -> StateVector:
    """In-place ``state <- exp(i * angle * P) state``; returns the state."""
    _check_size(state, p)
    if angle == 0.0:
        return state
    if p.is_identity:
        state.amps *= np.exp(1j * angle)
        return state
    flipped = apply_pauli(state, p)
    state.amps *= np.cos(angle)
    state.amps += (1j * np.sin(angle)) * flipped
    return state


def expectation(state: StateVector, p: PauliString) -> float:
    """<psi|P|psi>, clamped to [-1, 1]."""
    value = np.vdot(state.amps, apply_pauli(state, p))
    return float(min(1.0, max(-1.0, value.real)))


def expectation_sum(state: StateVector, h: PauliSum) -> float:
    """Noiseless cost: identity_coeff + sum_i c_i <P_i>."""
    if h.n_qubits != state.n_qubits:
        raise PauliSizeError(
            f"size mismatch: state on {state.n_qubits}, sum on {h.n_qubits} qubits"
        )
    value = h.identity_coeff
    for term in h.terms:
        value += term.coeff * expectation(state, term.string)
    return value


def _check_size(state: StateVector, p: PauliString) -> None:
    if p.n_qubits != state.n_qubits:
        raise PauliSizeError(
            f"size mismatch: state on {state.n_qubits}, string on {p.n_qubits} qubits"
        )
