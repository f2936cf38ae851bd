"""Restricted Hartree-Fock with DIIS convergence acceleration."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from chem_ingest.basis import build_basis
from chem_ingest.integrals import integral_tables
from chem_ingest.molecules import MoleculeSpec


class SCFConvergenceError(RuntimeError):
    pass


@dataclass
class ScfResult:
    energy: float  # total RHF energy including nuclear repulsion
    orbital_energies: np.ndarray
    coefficients: np.ndarray  # AO x MO
    core_hamiltonian: np.ndarray
    eri_ao: np.ndarray  # chemists' (ij|kl)
    overlap: np.ndarray
    nuclear_repulsion: float
    n_electrons: int

    @property
    def n_orbitals(self) -> int:
        return self.coefficients.shape[1]


def run_rhf(
    spec: MoleculeSpec,
    max_iterations: int = 200,
    tolerance: float = 1e-10,
) -> ScfResult:
    if spec.n_electrons % 2 != 0:
        raise ValueError("RHF needs an even electron count")
    functions = build_basis(spec.positions_bohr())
    S, T, V, eri = integral_tables(functions, spec.nuclei())
    h_core = T + V
    e_nuc = spec.nuclear_repulsion()
    n_occ = spec.n_electrons // 2

    s_vals, s_vecs = np.linalg.eigh(S)
    if s_vals.min() < 1e-8:
        raise SCFConvergenceError("near-singular overlap matrix")
    X = s_vecs @ np.diag(s_vals ** -0.5) @ s_vecs.T

    def build_fock(D):
        J = np.einsum("pqrs,rs->pq", eri, D)
        K = np.einsum("prqs,rs->pq", eri, D)
        return h_core + 2.0 * J - K

    def density(C):
        occ = C[:, :n_occ]
        return occ @ occ.T

    # core guess
    _, C = _solve(h_core, X)
    D = density(C)
    fock_history: list[np.ndarray] = []
    error_history: list[np.ndarray] = []
    energy = 0.0
    for iteration in range(max_iterations):
        F = build_fock(D)
        # DIIS residual in the orthonormal basis
        residual = X.T @ (F @ D @ S - S @ D @ F) @ X
        fock_history.append(F)
        error_history.append(residual)
        if len(fock_history) > 8:
            fock_history.pop(0)
            error_history.pop(0)
        if len(fock_history) > 1:
            F = _diis_extrapolate(fock_history, error_history)
        eps, C = _solve(F, X)
        D_new = density(C)
        F_new = build_fock(D_new)
        e_new = float(np.sum(D_new * (h_core + F_new))) + e_nuc
        delta_d = np.max(np.abs(D_new - D))
        converged = abs(e_new - energy) < tolerance and delta_d < np.sqrt(tolerance)
        D, energy = D_new, e_new
        if converged and iteration > 1:
            eps, C = _solve(F_new, X)
            return ScfResult(
                energy=energy,
                orbital_energies=eps,
                coefficients=C,
                core_hamiltonian=h_core,
                eri_ao=eri,
                overlap=S,
                nuclear_repulsion=e_nuc,
                n_electrons=spec.n_electrons,
            )
    raise SCFConvergenceError(
        f"RHF did not converge in {max_iterations} iterations for {spec.name}"
    )


def _solve(F, X):
    eps, C_prime = np.linalg.eigh(X.T @ F @ X)
    return eps, X @ C_prime


def _diis_extrapolate(focks, errors):
    m = len(focks)
    B = -np.ones((m + 1, m + 1))
    B[m, m] = 0.0
    for i in range(m):
        for j in range(m):
            B[i, j] = float(np.sum(errors[i] * errors[j]))
    rhs = np.zeros(m + 1)
    rhs[m] = -1.0
    try:
        weights = np.linalg.solve(B, rhs)[:m]
    except np.linalg.LinAlgError:
        return focks[-1]
    return sum(w * F for w, F in zip(weights, focks))
