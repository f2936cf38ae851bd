"""Post-export checks on the emitted text files.

Re-reads both files and verifies: parseability, coefficient sanity,
electron count against qubit count, generator amplitude ordering, and
that the Hartree-Fock determinant's energy computed from the exported
Pauli terms matches the SCF energy to 1e-6 Hartree. The last check
exercises the whole integrals -> second quantization -> Jordan-Wigner
path against the independent SCF energy expression.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass
class VerifyReport:
    checks: list[tuple[str, bool, str]] = field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = ""):
        self.checks.append((name, passed, detail))

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.checks)

    def render(self) -> str:
        lines = []
        for name, passed, detail in self.checks:
            status = "ok" if passed else "FAIL"
            lines.append(f"{status:4s} {name}" + (f": {detail}" if detail else ""))
        return "\n".join(lines)


def _parse_hamiltonian(path):
    with open(path) as fh:
        lines = [
            line.split("#", 1)[0].strip()
            for line in fh
            if line.split("#", 1)[0].strip()
        ]
    n_qubits = int(lines[0].split()[1])
    electrons = int(lines[1].split()[1])
    identity = float(lines[2].split()[1])
    terms = []
    for line in lines[3:]:
        coeff, letters = line.split()
        terms.append((float(coeff), letters))
    return n_qubits, electrons, identity, terms


def _parse_generators(path):
    with open(path) as fh:
        lines = [
            line.split("#", 1)[0].strip()
            for line in fh
            if line.split("#", 1)[0].strip()
        ]
    n_qubits = int(lines[0].split()[1])
    electrons = int(lines[1].split()[1])
    amplitudes = []
    block_sizes = []
    for line in lines[2:]:
        parts = line.split()
        if parts[0] == "generator":
            amplitudes.append(float(parts[3]))
            block_sizes.append(0)
        else:
            block_sizes[-1] += 1
    return n_qubits, electrons, amplitudes, block_sizes


def hf_energy_from_terms(identity, terms, electrons) -> float:
    """<HF|H|HF> for the determinant occupying qubits 0..electrons-1.

    X/Y terms have zero diagonal expectation; a Z-only term contributes
    its coefficient times (-1)^(occupied bits under the Z mask).
    """
    energy = identity
    for coeff, letters in terms:
        if any(ch in "XY" for ch in letters):
            continue
        sign = 1.0
        for position, ch in enumerate(letters):
            if ch == "Z" and position < electrons:
                sign = -sign
        energy += coeff * sign
    return energy


def verify_export(ham_path, gen_path, scf_energy: float) -> VerifyReport:
    report = VerifyReport()
    n_qubits, electrons, identity, terms = _parse_hamiltonian(ham_path)
    report.add("hamiltonian-parse", True, f"{len(terms)} terms")
    finite = math.isfinite(identity) and all(
        math.isfinite(c) for c, _ in terms
    )
    report.add("coefficients-finite", finite)
    report.add(
        "electron-count",
        0 <= electrons <= n_qubits,
        f"{electrons} electrons on {n_qubits} qubits",
    )
    lengths_ok = all(len(letters) == n_qubits for _, letters in terms)
    report.add("term-lengths", lengths_ok)

    gen_qubits, gen_electrons, amplitudes, block_sizes = _parse_generators(gen_path)
    report.add(
        "headers-consistent",
        gen_qubits == n_qubits and gen_electrons == electrons,
    )
    ordering = all(
        abs(amplitudes[i]) >= abs(amplitudes[i + 1]) - 1e-15
        for i in range(len(amplitudes) - 1)
    )
    report.add("generator-ordering", ordering, f"{len(amplitudes)} generators")
    report.add("generator-blocks-nonempty", all(s > 0 for s in block_sizes))
    nonzero = all(abs(a) > 1e-8 for a in amplitudes)
    report.add("generator-amplitudes-nonzero", nonzero)

    hf_energy = hf_energy_from_terms(identity, terms, electrons)
    delta = abs(hf_energy - scf_energy)
    report.add(
        "hf-energy-vs-scf",
        delta < 1e-6,
        f"|{hf_energy:.10f} - {scf_energy:.10f}| = {delta:.2e} Ha",
    )
    return report
