"""STO-3G basis data and contracted Gaussian construction (H and O only)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ANGSTROM_TO_BOHR = 1.0 / 0.52917721067

# element -> list of shells (angular momentum label, exponents, coefficients)
STO3G = {
    "H": [
        ("s", [3.42525091, 0.62391373, 0.16885540],
         [0.15432897, 0.53532814, 0.44463454]),
    ],
    "O": [
        ("s", [130.7093200, 23.8088610, 6.4436083],
         [0.15432897, 0.53532814, 0.44463454]),
        ("s", [5.0331513, 1.1695961, 0.3803890],
         [-0.09996723, 0.39951283, 0.70011547]),
        ("p", [5.0331513, 1.1695961, 0.3803890],
         [0.15591627, 0.60768372, 0.39195739]),
    ],
}

NUCLEAR_CHARGE = {"H": 1, "O": 8}


@dataclass(frozen=True)
class BasisFunction:
    """Contracted Cartesian Gaussian: sum_k c_k N_k exp(-a_k r^2) x^lx y^ly z^lz."""

    center: tuple[float, float, float]
    powers: tuple[int, int, int]
    exponents: tuple[float, ...]
    coefficients: tuple[float, ...]  # include primitive norms and contraction norm


def _double_factorial(n: int) -> int:
    return 1 if n <= 1 else n * _double_factorial(n - 2)


def _primitive_norm(alpha: float, powers: tuple[int, int, int]) -> float:
    lx, ly, lz = powers
    total = lx + ly + lz
    pref = (2.0 * alpha / math.pi) ** 0.75 * (4.0 * alpha) ** (total / 2.0)
    denom = math.sqrt(
        _double_factorial(2 * lx - 1)
        * _double_factorial(2 * ly - 1)
        * _double_factorial(2 * lz - 1)
    )
    return pref / denom


def build_basis(atoms: list[tuple[str, np.ndarray]]) -> list[BasisFunction]:
    """Basis functions for (element, position-in-bohr) atoms, in input order."""
    functions: list[BasisFunction] = []
    for element, position in atoms:
        if element not in STO3G:
            raise ValueError(f"no STO-3G data for element {element!r}")
        for label, exponents, coefficients in STO3G[element]:
            powers_list = [(0, 0, 0)] if label == "s" else [
                (1, 0, 0), (0, 1, 0), (0, 0, 1)
            ]
            for powers in powers_list:
                raw = [
                    c * _primitive_norm(a, powers)
                    for a, c in zip(exponents, coefficients)
                ]
                function = BasisFunction(
                    tuple(position), powers, tuple(exponents), tuple(raw)
                )
                norm = _self_overlap(function)
                functions.append(
                    BasisFunction(
                        tuple(position), powers, tuple(exponents),
                        tuple(c / math.sqrt(norm) for c in raw),
                    )
                )
    return functions


def _self_overlap(function: BasisFunction) -> float:
    from chem_ingest.integrals import overlap_contracted

    return overlap_contracted(function, function)
