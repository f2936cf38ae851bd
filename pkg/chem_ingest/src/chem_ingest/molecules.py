"""Built-in molecular geometries and the geometry-file reader."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from chem_ingest.basis import ANGSTROM_TO_BOHR, NUCLEAR_CHARGE


@dataclass(frozen=True)
class MoleculeSpec:
    """Atoms with coordinates in Angstrom; frozen_orbitals counts spatial MOs."""

    name: str
    atoms: tuple[tuple[str, float, float, float], ...]
    charge: int = 0
    multiplicity: int = 1
    frozen_orbitals: int = 0
    basis: str = "sto-3g"

    def __post_init__(self):
        for element, x, y, z in self.atoms:
            if not all(math.isfinite(v) for v in (x, y, z)):
                raise ValueError(f"non-finite coordinate on {element}")
        if self.frozen_orbitals < 0:
            raise ValueError("frozen orbital count must be >= 0")
        if self.basis.lower() != "sto-3g":
            raise ValueError(f"only STO-3G is available, got {self.basis!r}")
        if self.multiplicity != 1:
            raise ValueError("only closed-shell singlets are supported")

    @property
    def n_electrons(self) -> int:
        return sum(NUCLEAR_CHARGE[e] for e, *_ in self.atoms) - self.charge

    def positions_bohr(self) -> list[tuple[str, np.ndarray]]:
        return [
            (e, np.array([x, y, z]) * ANGSTROM_TO_BOHR)
            for e, x, y, z in self.atoms
        ]

    def nuclei(self) -> list[tuple[int, tuple[float, float, float]]]:
        return [
            (NUCLEAR_CHARGE[e], tuple(pos)) for e, pos in self.positions_bohr()
        ]

    def nuclear_repulsion(self) -> float:
        nuclei = self.nuclei()
        energy = 0.0
        for i in range(len(nuclei)):
            for j in range(i + 1, len(nuclei)):
                zi, ri = nuclei[i]
                zj, rj = nuclei[j]
                distance = math.dist(ri, rj)
                energy += zi * zj / distance
        return energy


def _h4_chain() -> MoleculeSpec:
    spacing = 1.5
    atoms = tuple(("H", i * spacing, 0.0, 0.0) for i in range(4))
    return MoleculeSpec("h4_chain", atoms)


def _h4_square() -> MoleculeSpec:
    radius, theta = 1.5, math.pi / 4.0
    x, y = radius * math.cos(theta), radius * math.sin(theta)
    atoms = (
        ("H", x, y, 0.0), ("H", x, -y, 0.0),
        ("H", -x, y, 0.0), ("H", -x, -y, 0.0),
    )
    return MoleculeSpec("h4_square", atoms)


def _h2o_eq() -> MoleculeSpec:
    atoms = (
        ("O", 0.0, 0.0, 0.1173),
        ("H", 0.0, 0.7572, -0.4692),
        ("H", 0.0, -0.7572, -0.4692),
    )
    return MoleculeSpec("h2o_eq", atoms, frozen_orbitals=2)


def _h2o_stretched() -> MoleculeSpec:
    atoms = (
        ("O", 0.0, 0.0, 0.0),
        ("H", 0.0, 1.8186, 1.4081),
        ("H", 0.0, -1.8186, 1.4081),
    )
    return MoleculeSpec("h2o_stretched", atoms, frozen_orbitals=2)


BUILTIN = {
    "h4_chain": _h4_chain,
    "h4_square": _h4_square,
    "h2o_eq": _h2o_eq,
    "h2o_stretched": _h2o_stretched,
}


def named_molecule(name: str) -> MoleculeSpec:
    key = name.lower()
    if key not in BUILTIN:
        raise KeyError(
            f"unknown molecule {name!r}; built-ins: {', '.join(sorted(BUILTIN))}"
        )
    return BUILTIN[key]()


def read_geometry_file(path) -> MoleculeSpec:
    """Simple geometry format: optional 'frozen <n>' / 'charge <n>' headers,
    then one `element x y z` line per atom (Angstrom)."""
    frozen = 0
    charge = 0
    atoms = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "frozen":
                frozen = int(parts[1])
            elif parts[0] == "charge":
                charge = int(parts[1])
            else:
                if len(parts) != 4:
                    raise ValueError(f"expected 'element x y z', got {line!r}")
                atoms.append(
                    (parts[0], float(parts[1]), float(parts[2]), float(parts[3]))
                )
    if not atoms:
        raise ValueError(f"no atoms found in {path}")
    import pathlib

    return MoleculeSpec(
        pathlib.Path(path).stem, tuple(atoms), charge=charge,
        frozen_orbitals=frozen,
    )
