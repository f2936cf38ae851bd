"""Exact ground states, relative energy errors, and the sampling noise floor."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg as spla
from scipy import stats

from vqabench.dense import (
    DENSE_QUBIT_LIMIT,
    Sector,
    embed_sector_vector,
    pauli_sum_matrix,
)
from vqabench.paulis import PauliSum
from vqabench.statevector import StateVector, expectation

DEGENERACY_ATOL = 1e-8
RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class ExactSolution:
    e0: float
    ground_vector: StateVector
    degeneracy: int
    sector: Sector | None = None


class MetricUndefinedError(ValueError):
    pass


def exact_ground(h: PauliSum, sector: Sector | None = None) -> ExactSolution:
    """Lowest eigenpair of a Pauli sum, optionally inside an occupation sector.

    Dense solve up to 2^12 block dimension, Lanczos above; ties broken by
    taking the first eigenvector column of the deterministic decomposition.
    """
    matrix = pauli_sum_matrix(h, sector)
    herm_defect = abs(matrix - matrix.getH()).max()
    if herm_defect > 1e-9:
        raise ValueError(f"non-Hermitian input (defect {herm_defect:g})")
    dim = matrix.shape[0]
    if dim == 0:
        raise ValueError(f"sector {sector} is empty on {h.n_qubits} qubits")
    if dim <= (1 << DENSE_QUBIT_LIMIT):
        evals, evecs = np.linalg.eigh(matrix.toarray())
    else:
        k = min(8, dim - 1)
        v0 = np.full(dim, 1.0 / np.sqrt(dim))
        evals, evecs = spla.eigsh(matrix, k=k, which="SA", v0=v0, tol=0)
        order = np.argsort(evals, kind="stable")
        evals, evecs = evals[order], evecs[:, order]
    e0 = float(evals[0])
    degeneracy = int(np.sum(evals < e0 + DEGENERACY_ATOL))
    block = evecs[:, 0].astype(np.complex128)
    full = embed_sector_vector(h.n_qubits, sector, block) if sector is not None \
        else block
    vector = StateVector(h.n_qubits, full)
    residual = np.linalg.norm(
        pauli_sum_matrix(h) @ vector.amps - e0 * vector.amps
    )
    if residual > RESIDUAL_TOL:
        raise ValueError(f"eigenpair residual {residual:g} above {RESIDUAL_TOL:g}")
    return ExactSolution(e0, vector, degeneracy, sector)


def relative_error(c_value: float, e0: float, c0: float) -> float:
    """|(C - E0) / (E0 - c0)|, the error on the traceless Hamiltonian part."""
    if e0 == c0:
        raise MetricUndefinedError(
            f"relative error undefined: E0 == c0 == {e0}"
        )
    return abs((c_value - e0) / (e0 - c0))


def signed_relative_error(c_value: float, e0: float, c0: float) -> float:
    """(C - E0) / |E0 - c0|; negative values sit below the true energy."""
    if e0 == c0:
        raise MetricUndefinedError(
            f"relative error undefined: E0 == c0 == {e0}"
        )
    return (c_value - e0) / abs(e0 - c0)


@dataclass(frozen=True)
class NoiseFloor:
    variance: float
    quantile: float
    width: float
    confidence: float


def noise_floor(
    h: PauliSum, state_at_optimum: StateVector, shots: int, p: float
) -> NoiseFloor:
    """Width 2 m(p) sqrt(Var) of cost values indistinguishable from the optimum.

    The estimator is a sum of many independent bounded variables, so the
    quantile m(p) is taken from the standard normal distribution.
    """
    if not 0.0 < p <= 0.5:  # p = 0.5 is the degenerate median (zero width)
        raise ValueError(f"confidence parameter p must be in (0, 0.5], got {p}")
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    variance = 0.0
    for term in h.terms:
        mean = expectation(state_at_optimum, term.string)
        variance += term.coeff ** 2 * (1.0 - mean ** 2) / shots
    m_p = float(stats.norm.isf(p))
    return NoiseFloor(variance, m_p, 2.0 * m_p * np.sqrt(variance), p)


@dataclass(frozen=True)
class CandidateComparison:
    """Fig.-3-style record for one run: best-ever vs favourite candidates."""

    noisy_best: float
    c_best: float
    c_fav: float
    de_noisy_best: float
    de_best: float
    de_fav: float
    dre_best: float
    dre_fav: float


def compare_candidates(run, circuit, h: PauliSum, exact: ExactSolution) -> CandidateComparison:
    """Evaluate both returned candidates noiselessly and report signed errors."""
    from vqabench.ansatz import prepare  # runtime import avoids a module cycle
    from vqabench.statevector import expectation_sum

    best, favourite = run.best_params, run.favourite_params
    c_best = expectation_sum(prepare(circuit, best), h)
    c_fav = expectation_sum(prepare(circuit, favourite), h)
    noisy_best = run.best_noisy_value if run.best_noisy_value is not None else c_best
    e0, c0 = exact.e0, h.identity_coeff
    return CandidateComparison(
        noisy_best=noisy_best,
        c_best=c_best,
        c_fav=c_fav,
        de_noisy_best=signed_relative_error(noisy_best, e0, c0),
        de_best=signed_relative_error(c_best, e0, c0),
        de_fav=signed_relative_error(c_fav, e0, c0),
        dre_best=relative_error(c_best, e0, c0),
        dre_fav=relative_error(c_fav, e0, c0),
    )


def mean_confidence_interval(
    values, confidence: float = 0.95
) -> tuple[float, float | None, float | None]:
    """(mean, ci_low, ci_high) with a Student-t interval; CI absent for n < 2."""
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    if arr.size < 2:
        return mean, None, None
    half = float(
        stats.t.ppf(0.5 + confidence / 2.0, arr.size - 1)
        * arr.std(ddof=1)
        / np.sqrt(arr.size)
    )
    return mean, mean - half, mean + half
