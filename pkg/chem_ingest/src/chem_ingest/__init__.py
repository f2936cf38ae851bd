"""Molecular problem exporter: STO-3G RHF/CCSD to Pauli text formats."""

__version__ = "0.1.0"
