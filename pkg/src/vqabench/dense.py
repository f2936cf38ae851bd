"""Sparse/dense matrix forms of Pauli sums and particle-sector bookkeeping.

Spin-orbital convention (fixed project-wide): site ``s`` with spin
``sigma`` in {0: up, 1: down} is mode ``2 s + sigma``, so even qubits
carry the up spins.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from vqabench.paulis import _PHASES, PauliString, PauliSum

DENSE_QUBIT_LIMIT = 12


def _spin_masks(n_qubits: int) -> tuple[int, int]:
    up = sum(1 << q for q in range(0, n_qubits, 2))
    down = sum(1 << q for q in range(1, n_qubits, 2))
    return up, down


@dataclass(frozen=True)
class Sector:
    """Occupation-number constraints selecting a block of the Fock space.

    ``n_up``/``n_down`` count even/odd modes; either constraint may be
    left as None. ``n_particles`` alone constrains only the total.
    """

    n_particles: int | None = None
    n_up: int | None = None
    n_down: int | None = None

    def __post_init__(self):
        if self.n_up is not None and self.n_down is not None:
            total = self.n_up + self.n_down
            if self.n_particles is not None and self.n_particles != total:
                raise ValueError(
                    f"n_particles={self.n_particles} inconsistent with "
                    f"n_up+n_down={total}"
                )

    def label(self) -> str:
        parts = []
        if self.n_particles is not None:
            parts.append(f"N={self.n_particles}")
        if self.n_up is not None:
            parts.append(f"up={self.n_up}")
        if self.n_down is not None:
            parts.append(f"down={self.n_down}")
        return ",".join(parts) if parts else "full"


def half_filling_sector(n_sites: int) -> Sector:
    """Half filling; S_z = 0 for even site counts, one excess up spin otherwise."""
    n_up = (n_sites + 1) // 2
    n_down = n_sites // 2
    return Sector(n_particles=n_sites, n_up=n_up, n_down=n_down)


def sector_indices(n_qubits: int, sector: Sector | None) -> np.ndarray:
    """Basis indices of the sector, ascending (deterministic tie-break order)."""
    dim = 1 << n_qubits
    indices = np.arange(dim, dtype=np.int64)
    if sector is None:
        return indices
    up_mask, down_mask = _spin_masks(n_qubits)
    keep = np.ones(dim, dtype=bool)
    if sector.n_particles is not None:
        keep &= np.bitwise_count(indices) == sector.n_particles
    if sector.n_up is not None:
        keep &= np.bitwise_count(indices & up_mask) == sector.n_up
    if sector.n_down is not None:
        keep &= np.bitwise_count(indices & down_mask) == sector.n_down
    return indices[keep]


def pauli_string_matrix(p: PauliString) -> sp.coo_matrix:
    """Sparse matrix of one string: M[b ^ x, b] = i^{|x&z|} (-1)^{|z&b|}."""
    dim = 1 << p.n_qubits
    cols = np.arange(dim, dtype=np.int64)
    rows = cols ^ p.x
    signs = 1.0 - 2.0 * (np.bitwise_count(cols & p.z) & 1)
    data = _PHASES[(p.x & p.z).bit_count() % 4] * signs.astype(np.complex128)
    return sp.coo_matrix((data, (rows, cols)), shape=(dim, dim))


def pauli_sum_matrix(h: PauliSum, sector: Sector | None = None) -> sp.csr_matrix:
    """Sparse matrix of a Pauli sum, optionally restricted to a sector block."""
    dim = 1 << h.n_qubits
    acc = sp.csr_matrix((dim, dim), dtype=np.complex128)
    for term in h.terms:
        acc = acc + term.coeff * pauli_string_matrix(term.string).tocsr()
    acc = acc + h.identity_coeff * sp.identity(dim, dtype=np.complex128, format="csr")
    if sector is not None:
        idx = sector_indices(h.n_qubits, sector)
        acc = acc[idx][:, idx]
    return acc


def pauli_sum_dense(h: PauliSum, sector: Sector | None = None) -> np.ndarray:
    matrix = pauli_sum_matrix(h, sector)
    if matrix.shape[0] > (1 << DENSE_QUBIT_LIMIT):
        raise ValueError(
            f"refusing dense conversion at dimension {matrix.shape[0]}"
        )
    return matrix.toarray()


def embed_sector_vector(
    n_qubits: int, sector: Sector | None, block_vector: np.ndarray
) -> np.ndarray:
    """Lift a sector-block vector back into the full 2^n amplitude space."""
    full = np.zeros(1 << n_qubits, dtype=np.complex128)
    full[sector_indices(n_qubits, sector)] = block_vector
    return full


def total_number_sum(n_qubits: int) -> PauliSum:
    """Total occupation operator sum_j (I - Z_j)/2 as a Pauli sum."""
    pairs = [(-0.5, PauliString(n_qubits, 0, 1 << q)) for q in range(n_qubits)]
    return PauliSum.from_pairs(n_qubits, pairs, identity_coeff=0.5 * n_qubits)
