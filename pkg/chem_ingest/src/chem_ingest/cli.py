"""Command line: ingest --molecule <name|geometry file> --out <dir>."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from chem_ingest.export import export_problem
from chem_ingest.molecules import BUILTIN, named_molecule, read_geometry_file
from chem_ingest.scf import SCFConvergenceError
from chem_ingest.verify import verify_export


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="chem-ingest",
        description=(
            "Export a molecular problem (STO-3G RHF + CCSD amplitudes) to the "
            "Hamiltonian and UCC generator text formats"
        ),
    )
    parser.add_argument(
        "--molecule", required=True,
        help=f"built-in name ({', '.join(sorted(BUILTIN))}) or a geometry file",
    )
    parser.add_argument("--out", default="exports", help="output directory")
    parser.add_argument(
        "--skip-verify", action="store_true",
        help="do not run the post-export checks",
    )
    args = parser.parse_args(argv)

    try:
        if Path(args.molecule).is_file():
            spec = read_geometry_file(args.molecule)
        else:
            spec = named_molecule(args.molecule)
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        result = export_problem(spec, args.out)
    except SCFConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    print(f"molecule     {spec.name}")
    print(f"qubits       {result.n_qubits}")
    print(f"electrons    {result.n_electrons}")
    print(f"generators   {result.n_generators}")
    print(f"scf energy   {result.scf_energy:.10f} Ha")
    print(f"ccsd energy  {result.ccsd_energy:.10f} Ha")
    print(f"wrote        {result.hamiltonian_path}")
    print(f"wrote        {result.generator_path}")

    if not args.skip_verify:
        report = verify_export(
            result.hamiltonian_path, result.generator_path, result.scf_energy
        )
        print(report.render())
        if not report.ok:
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
