"""Binomial shot-noise model for measured expectation values.

Each Pauli expectation is sampled as ``1 - 2 B(p, M)/M`` with
``p = (1 - <P>)/2``, exactly the per-operator measurement statistics; a
Hamiltonian evaluation samples every term independently at the same
``M`` and costs ``M`` units of the per-Pauli budget. Randomness comes
from counter-based Philox substreams keyed on (run seed, evaluation
index, term index), so draw order never depends on scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from vqabench.paulis import PauliSum
from vqabench.statevector import StateVector, expectation


class BudgetExhausted(Exception):
    """Raised instead of sampling when an evaluation would overrun the budget."""


@dataclass
class ShotLedger:
    """Per-Pauli shot accounting for one optimization run."""

    budget_per_pauli: int
    spent: int = 0

    def __post_init__(self):
        if self.budget_per_pauli < 0:
            raise ValueError("budget must be non-negative")

    @property
    def remaining(self) -> int:
        return self.budget_per_pauli - self.spent

    def can_afford(self, shots: int) -> bool:
        return shots <= self.remaining

    def charge(self, shots: int) -> None:
        if shots < 1:
            raise ValueError(f"shots must be >= 1, got {shots}")
        if not self.can_afford(shots):
            raise BudgetExhausted(
                f"evaluation at {shots} shots refused: "
                f"{self.remaining} of {self.budget_per_pauli} remaining"
            )
        self.spent += shots


@dataclass(frozen=True)
class NoisyValue:
    value: float
    shots_per_pauli: int
    variance_estimate: float

    def __post_init__(self):
        if self.variance_estimate < 0:
            raise ValueError("variance_estimate must be non-negative")


class ShotRng:
    """Deterministic per-(evaluation, term) Philox substreams for one run."""

    def __init__(self, seed: int):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self.eval_index = 0

    def next_eval_index(self) -> int:
        index = self.eval_index
        self.eval_index += 1
        return index

    def term_stream(self, eval_index: int, term_index: int) -> np.random.Generator:
        bits = np.random.Philox(
            key=np.array([self.seed, 0], dtype=np.uint64),
            counter=np.array([0, 0, term_index, eval_index], dtype=np.uint64),
        )
        return np.random.Generator(bits)


def sample_expectation(exact: float, shots: int, rng: np.random.Generator) -> float:
    """Sampled <P>: 1 - 2 k/M with k ~ Binomial(M, (1 - <P>)/2)."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    if abs(exact) > 1.0 + 1e-9:
        raise ValueError(f"expectation {exact} outside [-1, 1]")
    p = (1.0 - min(1.0, max(-1.0, exact))) / 2.0
    k = int(rng.binomial(shots, p))
    return 1.0 - 2.0 * k / shots


def noisy_cost(
    state: StateVector,
    h: PauliSum,
    shots_per_pauli: int,
    ledger: ShotLedger,
    rng: ShotRng,
) -> NoisyValue:
    """One measured Hamiltonian evaluation; debits the ledger before sampling."""
    ledger.charge(shots_per_pauli)
    eval_index = rng.next_eval_index()
    value = h.identity_coeff
    variance = 0.0
    for term_index, term in enumerate(h.terms):
        mean = expectation(state, term.string)
        sampled = sample_expectation(
            mean, shots_per_pauli, rng.term_stream(eval_index, term_index)
        )
        value += term.coeff * sampled
        variance += term.coeff ** 2 * (1.0 - mean ** 2) / shots_per_pauli
    return NoisyValue(value, shots_per_pauli, variance)


def variance_bound(h: PauliSum, shots: int) -> float:
    """State-independent worst case sum_i c_i^2 / M."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    _, sq_sum = h.coefficient_norms()
    return sq_sum / shots
