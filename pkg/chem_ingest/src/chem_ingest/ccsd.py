"""Spin-orbital CCSD amplitudes over an active orbital window.

Standard CCSD amplitude equations with the usual one- and two-particle
intermediates, iterated to a fixed residual threshold. Frozen-core
orbitals are folded into the effective one-body operator before the
correlation treatment (see active_space), so these equations only ever
see the active window. Sizes here are tiny; everything is dense einsum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from chem_ingest.scf import ScfResult


class CCSDConvergenceError(RuntimeError):
    pass


@dataclass
class ActiveSpace:
    """Spin-orbital integrals over the active window plus the core offset."""

    core_energy: float  # nuclear repulsion + frozen-orbital contribution
    one_body: np.ndarray  # spatial h'_pq over active orbitals
    two_body: np.ndarray  # spatial chemists' (pq|rs) over active orbitals
    orbital_energies: np.ndarray  # active orbital eigenvalues
    n_electrons: int  # active electrons


def active_space(scf: ScfResult, frozen: int) -> ActiveSpace:
    """Transform to MO basis and fold the lowest ``frozen`` spatial orbitals."""
    C = scf.coefficients
    h_mo = C.T @ scf.core_hamiltonian @ C
    eri_mo = np.einsum(
        "pqrs,pi,qj,rk,sl->ijkl", scf.eri_ao, C, C, C, C, optimize=True
    )
    n_occ = scf.n_electrons // 2
    if frozen > n_occ:
        raise ValueError(f"cannot freeze {frozen} of {n_occ} occupied orbitals")
    core = list(range(frozen))
    active = list(range(frozen, scf.n_orbitals))
    core_energy = scf.nuclear_repulsion
    for i in core:
        core_energy += 2.0 * h_mo[i, i]
        for j in core:
            core_energy += 2.0 * eri_mo[i, i, j, j] - eri_mo[i, j, j, i]
    h_eff = h_mo[np.ix_(active, active)].copy()
    for index_p, p in enumerate(active):
        for index_q, q in enumerate(active):
            for i in core:
                h_eff[index_p, index_q] += (
                    2.0 * eri_mo[p, q, i, i] - eri_mo[p, i, i, q]
                )
    two = eri_mo[np.ix_(active, active, active, active)]
    return ActiveSpace(
        core_energy=core_energy,
        one_body=h_eff,
        two_body=two,
        orbital_energies=scf.orbital_energies[active],
        n_electrons=scf.n_electrons - 2 * frozen,
    )


@dataclass
class CCSDResult:
    t1: np.ndarray  # occ x virt (spin orbitals)
    t2: np.ndarray  # occ x occ x virt x virt (spin orbitals)
    correlation_energy: float
    n_occupied: int
    n_spin_orbitals: int


def _spin_orbital_tensors(space: ActiveSpace):
    """Antisymmetrized <pq||rs> and the spin-orbital Fock matrix.

    Spin orbital 2p+sigma (interleaved); physicists' notation.
    """
    n_spatial = space.one_body.shape[0]
    n = 2 * n_spatial
    h = np.zeros((n, n))
    for p in range(n_spatial):
        for q in range(n_spatial):
            for s in (0, 1):
                h[2 * p + s, 2 * q + s] = space.one_body[p, q]
    # <pq|rs> physicists' = (pr|qs) chemists' with matching spins
    coulomb = np.zeros((n, n, n, n))
    for p in range(n):
        for q in range(n):
            for r in range(n):
                if (p - r) % 2:
                    continue
                for s in range(n):
                    if (q - s) % 2:
                        continue
                    coulomb[p, q, r, s] = space.two_body[
                        p // 2, r // 2, q // 2, s // 2
                    ]
    anti = coulomb - coulomb.transpose(0, 1, 3, 2)
    occ = space.n_electrons
    fock = h.copy()
    for p in range(n):
        for q in range(n):
            fock[p, q] += sum(anti[p, i, q, i] for i in range(occ))
    return fock, anti


def run_ccsd(
    space: ActiveSpace,
    max_iterations: int = 200,
    tolerance: float = 1e-10,
) -> CCSDResult:
    fock, v = _spin_orbital_tensors(space)
    n = fock.shape[0]
    occ = space.n_electrons
    o = slice(0, occ)
    u = slice(occ, n)
    n_virt = n - occ

    eps = np.diag(fock)
    d1 = eps[o, None] - eps[None, u]
    d2 = (
        eps[o, None, None, None] + eps[None, o, None, None]
        - eps[None, None, u, None] - eps[None, None, None, u]
    )
    t1 = np.zeros((occ, n_virt))
    t2 = v[o, o, u, u] / d2
    diis = _AmplitudeDiis(max_vectors=8)

    def tau_tilde():
        return t2 + 0.5 * (
            np.einsum("ia,jb->ijab", t1, t1) - np.einsum("ib,ja->ijab", t1, t1)
        )

    def tau():
        return t2 + (
            np.einsum("ia,jb->ijab", t1, t1) - np.einsum("ib,ja->ijab", t1, t1)
        )

    energy = _ccsd_energy(fock, v, t1, t2, o, u)
    for _ in range(max_iterations):
        tt = tau_tilde()
        F_ae = (
            -0.5 * np.einsum("me,ma->ae", fock[o, u], t1)
            + np.einsum("mf,mafe->ae", t1, v[o, u, u, u])
            - 0.5 * np.einsum("mnaf,mnef->ae", tt, v[o, o, u, u])
        )
        F_mi = (
            0.5 * np.einsum("ie,me->mi", t1, fock[o, u])
            + np.einsum("ne,mnie->mi", t1, v[o, o, o, u])
            + 0.5 * np.einsum("inef,mnef->mi", tt, v[o, o, u, u])
        )
        F_me = fock[o, u] + np.einsum("nf,mnef->me", t1, v[o, o, u, u])

        t = tau()
        W_mnij = (
            v[o, o, o, o]
            + np.einsum("je,mnie->mnij", t1, v[o, o, o, u])
            - np.einsum("ie,mnje->mnij", t1, v[o, o, o, u])
            + 0.25 * np.einsum("ijef,mnef->mnij", t, v[o, o, u, u])
        )
        W_abef = (
            v[u, u, u, u]
            - np.einsum("mb,amef->abef", t1, v[u, o, u, u])
            + np.einsum("ma,bmef->abef", t1, v[u, o, u, u])
            + 0.25 * np.einsum("mnab,mnef->abef", t, v[o, o, u, u])
        )
        W_mbej = (
            v[o, u, u, o]
            + np.einsum("jf,mbef->mbej", t1, v[o, u, u, u])
            - np.einsum("nb,mnej->mbej", t1, v[o, o, u, o])
            - np.einsum(
                "jnfb,mnef->mbej",
                0.5 * t2 + np.einsum("jf,nb->jnfb", t1, t1),
                v[o, o, u, u],
            )
        )

        t1_new = (
            fock[o, u]
            + np.einsum("ie,ae->ia", t1, F_ae)
            - np.einsum("ma,mi->ia", t1, F_mi)
            + np.einsum("imae,me->ia", t2, F_me)
            - np.einsum("nf,naif->ia", t1, v[o, u, o, u])
            - 0.5 * np.einsum("imef,maef->ia", t2, v[o, u, u, u])
            - 0.5 * np.einsum("mnae,nmei->ia", t2, v[o, o, u, o])
        ) / d1

        P_ab_1 = np.einsum(
            "ijae,be->ijab", t2, F_ae - 0.5 * np.einsum("mb,me->be", t1, F_me)
        )
        P_ij_1 = np.einsum(
            "imab,mj->ijab", t2, F_mi + 0.5 * np.einsum("je,me->mj", t1, F_me)
        )
        ring = np.einsum("imae,mbej->ijab", t2, W_mbej) - np.einsum(
            "ie,ma,mbej->ijab", t1, t1, v[o, u, u, o]
        )
        P_ie = np.einsum("ie,abej->ijab", t1, v[u, u, u, o])
        P_ma = np.einsum("ma,mbij->ijab", t1, v[o, u, o, o])

        t2_new = (
            v[o, o, u, u]
            + P_ab_1 - P_ab_1.transpose(0, 1, 3, 2)
            - P_ij_1 + P_ij_1.transpose(1, 0, 2, 3)
            + 0.5 * np.einsum("mnab,mnij->ijab", t, W_mnij)
            + 0.5 * np.einsum("ijef,abef->ijab", t, W_abef)
            + ring
            - ring.transpose(1, 0, 2, 3)
            - ring.transpose(0, 1, 3, 2)
            + ring.transpose(1, 0, 3, 2)
            + P_ie - P_ie.transpose(1, 0, 2, 3)
            - P_ma + P_ma.transpose(0, 1, 3, 2)
        ) / d2

        delta = max(
            float(np.max(np.abs(t1_new - t1))), float(np.max(np.abs(t2_new - t2)))
        )
        if not np.isfinite(delta):
            raise CCSDConvergenceError("CCSD amplitudes diverged")
        t1, t2 = diis.extrapolate(t1_new, t2_new, t1_new - t1, t2_new - t2)
        energy = _ccsd_energy(fock, v, t1, t2, o, u)
        if delta < tolerance:
            return CCSDResult(
                t1=t1, t2=t2, correlation_energy=energy,
                n_occupied=occ, n_spin_orbitals=n,
            )
    raise CCSDConvergenceError(
        f"CCSD did not converge in {max_iterations} iterations"
    )


class _AmplitudeDiis:
    """Pulay mixing on the stacked (t1, t2) amplitude vector."""

    def __init__(self, max_vectors: int = 8):
        self.max_vectors = max_vectors
        self.amplitudes: list[np.ndarray] = []
        self.residuals: list[np.ndarray] = []
        self.shapes = None

    def extrapolate(self, t1, t2, r1, r2):
        self.shapes = (t1.shape, t2.shape)
        self.amplitudes.append(np.concatenate([t1.ravel(), t2.ravel()]))
        self.residuals.append(np.concatenate([r1.ravel(), r2.ravel()]))
        if len(self.amplitudes) > self.max_vectors:
            self.amplitudes.pop(0)
            self.residuals.pop(0)
        m = len(self.amplitudes)
        if m < 2:
            return t1, t2
        B = -np.ones((m + 1, m + 1))
        B[m, m] = 0.0
        for i in range(m):
            for j in range(m):
                B[i, j] = float(self.residuals[i] @ self.residuals[j])
        rhs = np.zeros(m + 1)
        rhs[m] = -1.0
        try:
            weights = np.linalg.solve(B, rhs)[:m]
        except np.linalg.LinAlgError:
            return t1, t2
        mixed = sum(w * a for w, a in zip(weights, self.amplitudes))
        n1 = int(np.prod(self.shapes[0]))
        return (
            mixed[:n1].reshape(self.shapes[0]),
            mixed[n1:].reshape(self.shapes[1]),
        )


def _ccsd_energy(fock, v, t1, t2, o, u) -> float:
    return float(
        np.einsum("ia,ia->", fock[o, u], t1)
        + 0.25 * np.einsum("ijab,ijab->", v[o, o, u, u], t2)
        + 0.5 * np.einsum("ijab,ia,jb->", v[o, o, u, u], t1, t1)
    )
