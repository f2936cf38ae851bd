"""Benchmarking toolkit for gradient-free optimizers on variational quantum eigensolvers.

Dense statevector simulation of small fermionic problems (Fermi-Hubbard
lattices, molecular Hamiltonians read from text files), a binomial
shot-noise model for the measured cost function, SPSA and CMA-ES with
one- and three-stage shot schedules, an iterated-racing hyperparameter
tuner, and analysis utilities for relative energy errors and the
sampling noise floor of best-ever candidates.
"""

from vqabench.paulis import PauliString, PauliTerm, PauliSum, parse_pauli
from vqabench.statevector import StateVector, basis_state
from vqabench.sampling import ShotLedger, NoisyValue, BudgetExhausted
from vqabench.schedules import ShotSchedule, one_stage, three_stage

__all__ = [
    "PauliString",
    "PauliTerm",
    "PauliSum",
    "parse_pauli",
    "StateVector",
    "basis_state",
    "ShotLedger",
    "NoisyValue",
    "BudgetExhausted",
    "ShotSchedule",
    "one_stage",
    "three_stage",
]

__version__ = "0.1.0"
