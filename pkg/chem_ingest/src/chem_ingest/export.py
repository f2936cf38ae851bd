"""End-to-end export: geometry -> RHF -> CCSD -> Hamiltonian + generator files."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from chem_ingest.ccsd import active_space, run_ccsd
from chem_ingest.molecules import MoleculeSpec
from chem_ingest.qubit import (
    qubit_hamiltonian,
    render_generator_file,
    render_hamiltonian_file,
    ucc_generators,
)
from chem_ingest.scf import run_rhf


@dataclass
class ExportResult:
    hamiltonian_path: Path
    generator_path: Path
    n_qubits: int
    n_electrons: int
    n_generators: int
    scf_energy: float
    ccsd_energy: float


def export_problem(spec: MoleculeSpec, out_dir) -> ExportResult:
    """Write ``<name>.ham`` and ``<name>.gen``; no partial files on failure."""
    scf = run_rhf(spec)
    space = active_space(scf, spec.frozen_orbitals)
    ccsd = run_ccsd(space)
    identity, terms = qubit_hamiltonian(space)
    generators = ucc_generators(ccsd)
    n_qubits = 2 * space.one_body.shape[0]
    electrons = space.n_electrons

    ham_text = render_hamiltonian_file(identity, terms, n_qubits, electrons)
    gen_text = render_generator_file(generators, n_qubits, electrons)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ham_path = out / f"{spec.name}.ham"
    gen_path = out / f"{spec.name}.gen"
    ham_path.write_text(ham_text)
    gen_path.write_text(gen_text)
    return ExportResult(
        hamiltonian_path=ham_path,
        generator_path=gen_path,
        n_qubits=n_qubits,
        n_electrons=electrons,
        n_generators=len(generators),
        scf_energy=scf.energy,
        ccsd_energy=scf.energy + ccsd.correlation_energy,
    )
