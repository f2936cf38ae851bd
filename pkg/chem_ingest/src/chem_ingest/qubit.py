"""Second-quantized Hamiltonian, Jordan-Wigner mapping, and file export.

Spin orbital 2p+sigma (sigma 0 = up) sits on qubit 2p+sigma, matching
the consumer toolkit's convention. Pauli strings are (x, z) bit-mask
pairs with the phase convention i^{|x&z|} X^x Z^z; coefficients are
accumulated complex and must come out real (Hamiltonian) or imaginary
(excitation generators).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from chem_ingest.ccsd import ActiveSpace, CCSDResult

LETTERS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
PHASES = (1 + 0j, 1j, -1 + 0j, -1j)
COEFF_TOL = 1e-12
AMPLITUDE_TOL = 1e-8


def _string_product(x1, z1, x2, z2):
    x3, z3 = x1 ^ x2, z1 ^ z2
    exponent = (
        (x1 & z1).bit_count() + (x2 & z2).bit_count()
        - (x3 & z3).bit_count() + 2 * (z1 & x2).bit_count()
    ) % 4
    return PHASES[exponent], x3, z3


def _ladder(mode: int, dagger: bool):
    chain = (1 << mode) - 1
    bit = 1 << mode
    y_weight = -0.5j if dagger else 0.5j
    return [(0.5, bit, chain), (y_weight, bit, chain | bit)]


def jw_product(factors, weight=1.0):
    """JW image of ``weight * prod (mode, dagger)`` as {(x, z): complex}."""
    acc = {(0, 0): complex(weight)}
    for mode, dagger in factors:
        expanded: dict[tuple[int, int], complex] = {}
        for (x1, z1), c1 in acc.items():
            for c2, x2, z2 in _ladder(mode, dagger):
                phase, x3, z3 = _string_product(x1, z1, x2, z2)
                key = (x3, z3)
                expanded[key] = expanded.get(key, 0.0) + c1 * c2 * phase
        acc = expanded
    return {k: v for k, v in acc.items() if abs(v) > COEFF_TOL}


def _accumulate(target, source):
    for key, value in source.items():
        target[key] = target.get(key, 0.0) + value


def qubit_hamiltonian(space: ActiveSpace) -> tuple[float, dict]:
    """(identity coefficient, {(x, z): real coeff}) of the active Hamiltonian."""
    n_spatial = space.one_body.shape[0]
    acc: dict[tuple[int, int], complex] = {}
    for p in range(n_spatial):
        for q in range(n_spatial):
            h = space.one_body[p, q]
            if abs(h) < COEFF_TOL:
                continue
            for s in (0, 1):
                _accumulate(acc, jw_product(
                    [(2 * p + s, True), (2 * q + s, False)], h
                ))
    for p in range(n_spatial):
        for q in range(n_spatial):
            for r in range(n_spatial):
                for s_idx in range(n_spatial):
                    g = space.two_body[p, q, r, s_idx]
                    if abs(g) < COEFF_TOL:
                        continue
                    for s1 in (0, 1):
                        for s2 in (0, 1):
                            _accumulate(acc, jw_product(
                                [
                                    (2 * p + s1, True),
                                    (2 * r + s2, True),
                                    (2 * s_idx + s2, False),
                                    (2 * q + s1, False),
                                ],
                                0.5 * g,
                            ))
    identity = space.core_energy
    terms: dict[tuple[int, int], float] = {}
    for (x, z), value in acc.items():
        if abs(value.imag) > 1e-9:
            raise ValueError(f"non-Hermitian term with weight {value}")
        if x == 0 and z == 0:
            identity += value.real
        elif abs(value.real) > COEFF_TOL:
            terms[(x, z)] = value.real
    return identity, terms


@dataclass(frozen=True)
class UccGenerator:
    """One spin-orbital excitation block: tau - tau^dag with its CC amplitude."""

    amplitude: float
    paulis: dict  # {(x, z): g} meaning i g P
    description: str


def _anti_hermitian_paulis(factors) -> dict:
    """JW of tau - tau^dag for one ladder product; real weights of i g P."""
    acc: dict[tuple[int, int], complex] = {}
    _accumulate(acc, jw_product(factors, 1.0))
    reversed_dagger = [(m, not d) for m, d in reversed(factors)]
    _accumulate(acc, jw_product(reversed_dagger, -1.0))
    out: dict[tuple[int, int], float] = {}
    for (x, z), value in acc.items():
        if abs(value) < COEFF_TOL:
            continue
        if abs(value.real) > 1e-9:
            raise ValueError(f"generator is not anti-Hermitian: {value}")
        out[(x, z)] = value.imag
    return out


def ucc_generators(
    result: CCSDResult, threshold: float = AMPLITUDE_TOL
) -> list[UccGenerator]:
    """Spin-orbital singles and doubles with non-vanishing CC amplitudes.

    One excitation operator per canonical amplitude entry: singles
    t1[i, a] (spin conserving by construction) and doubles t2[i, j, a, b]
    with i < j, a < b. Entries at or below ``threshold`` in magnitude are
    dropped; symmetry-forbidden amplitudes converge to float dust well
    under it. Spin-orbital m sits on qubit m (mode = 2 spatial + spin).
    """
    occ = result.n_occupied
    n_so = result.n_spin_orbitals
    generators: list[UccGenerator] = []
    for i in range(occ):
        for a in range(n_so - occ):
            amplitude = float(result.t1[i, a])
            if abs(amplitude) <= threshold:
                continue
            factors = [(occ + a, True), (i, False)]
            generators.append(UccGenerator(
                amplitude, _anti_hermitian_paulis(factors), f"s {i}->{occ + a}"
            ))
    for i in range(occ):
        for j in range(i + 1, occ):
            for a in range(n_so - occ):
                for b in range(a + 1, n_so - occ):
                    amplitude = float(result.t2[i, j, a, b])
                    if abs(amplitude) <= threshold:
                        continue
                    factors = [
                        (occ + a, True), (occ + b, True), (j, False), (i, False),
                    ]
                    generators.append(UccGenerator(
                        amplitude,
                        _anti_hermitian_paulis(factors),
                        f"d {i},{j}->{occ + a},{occ + b}",
                    ))
    # descending |amplitude|; canonical enumeration order breaks exact ties
    generators.sort(key=lambda g: -abs(g.amplitude))
    return generators


# ---------------------------------------------------------------------------
# text formats shared with the consumer toolkit
# ---------------------------------------------------------------------------

def letters_of(x: int, z: int, n_qubits: int) -> str:
    return "".join(
        LETTERS[(x >> q & 1, z >> q & 1)] for q in range(n_qubits)
    )


def format_float(value: float) -> str:
    return f"{value:.16e}"


def render_hamiltonian_file(identity, terms, n_qubits, electrons) -> str:
    lines = [
        f"qubits {n_qubits}",
        f"electrons {electrons}",
        f"identity {format_float(identity)}",
    ]
    ordered = sorted(
        ((letters_of(x, z, n_qubits), c) for (x, z), c in terms.items()),
        key=lambda item: item[0],
    )
    lines += [f"{format_float(c)} {letters}" for letters, c in ordered]
    return "\n".join(lines) + "\n"


def render_generator_file(generators, n_qubits, electrons) -> str:
    lines = [f"qubits {n_qubits}", f"electrons {electrons}"]
    for index, generator in enumerate(generators):
        lines.append(
            f"generator {index} amplitude {format_float(generator.amplitude)}"
        )
        ordered = sorted(
            (
                (letters_of(x, z, n_qubits), g)
                for (x, z), g in generator.paulis.items()
            ),
            key=lambda item: item[0],
        )
        lines += [f"{format_float(g)} {letters}" for letters, g in ordered]
    return "\n".join(lines) + "\n"
