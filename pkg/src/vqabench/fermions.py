"""Fermionic operators, Jordan-Wigner mapping, and Fermi-Hubbard models.

Jordan-Wigner convention: ``a_j = Z_0 ... Z_{j-1} (X_j + i Y_j)/2``,
with the project-wide spin-orbital ordering ``mode = 2 site + spin``
(spin 0 = up). Hermitian inputs map to real-coefficient Pauli sums;
anti-Hermitian excitation generators map to sets of strings with purely
imaginary weights, stored as the real numbers ``g_k`` of ``i g_k P_k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from vqabench.paulis import (
    PauliString,
    PauliSum,
    PauliTerm,
    format_float,
    multiply,
    parse_pauli,
)

IMAG_TOL = 1e-12


class NotHermitianError(ValueError):
    """A Hermitian (or anti-Hermitian) result was requested but not produced."""


class MalformedExcitationError(ValueError):
    pass


# factors are (mode index, dagger flag), applied right to left like the
# written operator product.
Factors = tuple[tuple[int, bool], ...]


@dataclass(frozen=True)
class FermionOp:
    """Real linear combination of ladder-operator products."""

    products: tuple[tuple[float, Factors], ...]

    @staticmethod
    def from_terms(terms: Iterable[tuple[float, Sequence[tuple[int, bool]]]]) -> "FermionOp":
        return FermionOp(tuple((c, tuple(f)) for c, f in terms))

    def __add__(self, other: "FermionOp") -> "FermionOp":
        return FermionOp(self.products + other.products)

    def scaled(self, factor: float) -> "FermionOp":
        return FermionOp(tuple((factor * c, f) for c, f in self.products))

    def dagger(self) -> "FermionOp":
        return FermionOp(
            tuple(
                (c, tuple((mode, not dag) for mode, dag in reversed(f)))
                for c, f in self.products
            )
        )

    def max_mode(self) -> int:
        return max(
            (mode for _, f in self.products for mode, _ in f), default=-1
        )


def hopping(i: int, j: int) -> FermionOp:
    """a^dag_i a_j + a^dag_j a_i."""
    return FermionOp.from_terms(
        [(1.0, [(i, True), (j, False)]), (1.0, [(j, True), (i, False)])]
    )


def number(j: int) -> FermionOp:
    return FermionOp.from_terms([(1.0, [(j, True), (j, False)])])


def number_pair(a: int, b: int) -> FermionOp:
    """n_a n_b."""
    return FermionOp.from_terms(
        [(1.0, [(a, True), (a, False), (b, True), (b, False)])]
    )


def _jw_ladder(mode: int, dagger: bool, n_modes: int) -> list[tuple[complex, PauliString]]:
    """JW image of one ladder operator as two weighted strings."""
    chain = (1 << mode) - 1
    x_string = PauliString(n_modes, 1 << mode, chain)
    y_string = PauliString(n_modes, 1 << mode, chain | (1 << mode))
    y_weight = -0.5j if dagger else 0.5j
    return [(0.5, x_string), (y_weight, y_string)]


def _jw_expand(op: FermionOp, n_modes: int) -> dict[tuple[int, int], complex]:
    if op.max_mode() >= n_modes:
        raise ValueError(
            f"mode {op.max_mode()} out of range for {n_modes} modes"
        )
    acc: dict[tuple[int, int], complex] = {}
    identity = PauliString(n_modes, 0, 0)
    for coeff, factors in op.products:
        partial: list[tuple[complex, PauliString]] = [(complex(coeff), identity)]
        for mode, dagger in factors:
            ladder = _jw_ladder(mode, dagger, n_modes)
            expanded = []
            for c1, s1 in partial:
                for c2, s2 in ladder:
                    phase, product = multiply(s1, s2)
                    expanded.append((c1 * c2 * phase, product))
            partial = expanded
        for c, s in partial:
            key = (s.x, s.z)
            acc[key] = acc.get(key, 0.0) + c
    return {k: v for k, v in acc.items() if abs(v) > IMAG_TOL}


def jordan_wigner(op: FermionOp, n_modes: int) -> PauliSum:
    """Exact Pauli form of a Hermitian fermionic operator."""
    acc = _jw_expand(op, n_modes)
    pairs = []
    identity_coeff = 0.0
    for (x, z), c in acc.items():
        if abs(c.imag) > IMAG_TOL:
            raise NotHermitianError(
                f"non-Hermitian input: term {PauliString(n_modes, x, z)} "
                f"has imaginary weight {c.imag:g}"
            )
        if x == 0 and z == 0:
            identity_coeff = c.real
        else:
            pairs.append((c.real, PauliString(n_modes, x, z)))
    return PauliSum.from_pairs(n_modes, pairs, identity_coeff)


def jordan_wigner_antihermitian(op: FermionOp, n_modes: int) -> PauliSum:
    """Pauli form of an anti-Hermitian operator, as real weights g_k of i g_k P_k."""
    acc = _jw_expand(op, n_modes)
    pairs = []
    for (x, z), c in acc.items():
        if abs(c.real) > IMAG_TOL:
            raise NotHermitianError(
                f"non-anti-Hermitian input: term {PauliString(n_modes, x, z)} "
                f"has real weight {c.real:g}"
            )
        if x == 0 and z == 0:
            raise NotHermitianError("anti-Hermitian operator acquired an identity part")
        pairs.append((c.imag, PauliString(n_modes, x, z)))
    return PauliSum.from_pairs(n_modes, pairs, 0.0)


# ---------------------------------------------------------------------------
# Fermi-Hubbard lattices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HubbardSpec:
    """nx-by-ny lattice (nx rows, ny columns), hopping t, on-site repulsion u.

    Site (r, c) has index ``r * ny + c``; half filling is the default
    particle sector when ``n_particles`` is left at 0.
    """

    nx: int
    ny: int
    t: float = 1.0
    u: float = 2.0
    n_particles: int = 0

    def __post_init__(self):
        if self.nx * self.ny < 2:
            raise ValueError(
                f"degenerate lattice {self.nx}x{self.ny}: need at least 2 sites"
            )

    @property
    def n_sites(self) -> int:
        return self.nx * self.ny

    @property
    def n_modes(self) -> int:
        return 2 * self.n_sites

    @property
    def filling(self) -> int:
        return self.n_particles if self.n_particles else self.n_sites

    def label(self) -> str:
        return f"hubbard-{self.nx}x{self.ny}-t{self.t:g}-u{self.u:g}"


PART_ORDER = ("u", "h1", "v1", "h2", "v2")


@dataclass(frozen=True)
class HubbardPartition:
    """Hamiltonian split into disjoint bond classes plus the on-site part.

    Horizontal bonds run along columns and are classed h1/h2 by the
    parity of the left column; vertical bonds along rows, v1/v2 by the
    parity of the upper row. Open boundaries.
    """

    spec: HubbardSpec
    h_parts: dict[str, PauliSum] = field(default_factory=dict)

    @property
    def n_qubits(self) -> int:
        return self.spec.n_modes

    @property
    def present_classes(self) -> tuple[str, ...]:
        return tuple(name for name in PART_ORDER if name in self.h_parts)

    def total(self) -> PauliSum:
        acc = PauliSum(self.n_qubits)
        for name in self.present_classes:
            acc = acc.combine(self.h_parts[name])
        return acc

    def hopping_total(self) -> PauliSum:
        acc = PauliSum(self.n_qubits)
        for name in self.present_classes:
            if name != "u":
                acc = acc.combine(self.h_parts[name])
        return acc


def hubbard_bonds(spec: HubbardSpec) -> dict[str, list[tuple[int, int]]]:
    """Nearest-neighbour site pairs per bond class; each class is a matching.

    Chains always expose horizontal classes whichever way they are
    written (an Lx1 spec is treated as 1xL).
    """
    rows, cols = spec.nx, spec.ny
    if cols == 1 and rows > 1:
        rows, cols = cols, rows
    bonds: dict[str, list[tuple[int, int]]] = {}

    def site(r: int, c: int) -> int:
        return r * cols + c

    for r in range(rows):
        for c in range(cols - 1):
            name = "h1" if c % 2 == 0 else "h2"
            bonds.setdefault(name, []).append((site(r, c), site(r, c + 1)))
    for r in range(rows - 1):
        for c in range(cols):
            name = "v1" if r % 2 == 0 else "v2"
            bonds.setdefault(name, []).append((site(r, c), site(r + 1, c)))
    return bonds


def hubbard_fermion_op(spec: HubbardSpec) -> FermionOp:
    """Monolithic -t hopping + U on-site operator (for cross-checks)."""
    op = FermionOp(())
    for pairs in hubbard_bonds(spec).values():
        for i, j in pairs:
            for s in (0, 1):
                op = op + hopping(2 * i + s, 2 * j + s).scaled(-spec.t)
    for i in range(spec.n_sites):
        op = op + number_pair(2 * i, 2 * i + 1).scaled(spec.u)
    return op


def build_hubbard(spec: HubbardSpec) -> HubbardPartition:
    n_modes = spec.n_modes
    parts: dict[str, PauliSum] = {}
    for name, pairs in hubbard_bonds(spec).items():
        op = FermionOp(())
        for i, j in pairs:
            for s in (0, 1):
                op = op + hopping(2 * i + s, 2 * j + s).scaled(-spec.t)
        parts[name] = jordan_wigner(op, n_modes)
    on_site = FermionOp(())
    for i in range(spec.n_sites):
        on_site = on_site + number_pair(2 * i, 2 * i + 1).scaled(spec.u)
    parts["u"] = jordan_wigner(on_site, n_modes)
    return HubbardPartition(spec, parts)


# ---------------------------------------------------------------------------
# UCC excitation generators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExcitationGenerator:
    """Anti-Hermitian ``tau - tau^dag`` with its coupled-cluster amplitude.

    ``paulis`` holds the real weights g_k of the terms ``i g_k P_k``.
    """

    paulis: PauliSum
    amplitude: float


def excitation_generator(
    excitation: FermionOp, amplitude: float, n_modes: int
) -> ExcitationGenerator:
    """Map a single or double excitation to its generator tau - tau^dag."""
    if len(excitation.products) != 1:
        raise MalformedExcitationError(
            f"expected one ladder product, got {len(excitation.products)}"
        )
    _, factors = excitation.products[0]
    flags = tuple(dag for _, dag in factors)
    if flags not in ((True, False), (True, True, False, False)):
        raise MalformedExcitationError(
            "expected a^dag a (single) or a^dag a^dag a a (double) "
            f"ordering, got flags {flags}"
        )
    modes = [mode for mode, _ in factors]
    if len(set(modes)) != len(modes):
        raise MalformedExcitationError(f"repeated mode in excitation {modes}")
    # the generator carries unit weight; the CC amplitude only orders it
    tau = FermionOp(((1.0, factors),))
    anti = tau + tau.dagger().scaled(-1.0)
    return ExcitationGenerator(
        jordan_wigner_antihermitian(anti, n_modes), amplitude
    )


# ---------------------------------------------------------------------------
# Generator file format (shared with the chemistry exporter)
#
#   qubits <n>
#   electrons <k>
#   generator <index> amplitude <a>
#   <g_k> <paulistring>
#   ...
#
# Blocks ordered by descending |amplitude|.
# ---------------------------------------------------------------------------

class GeneratorFormatError(ValueError):
    pass


def render_generators(
    generators: Sequence[ExcitationGenerator], n_qubits: int, electrons: int
) -> str:
    ordered = sorted(
        generators, key=lambda g: -abs(g.amplitude)
    )
    lines = [f"qubits {n_qubits}", f"electrons {electrons}"]
    for index, gen in enumerate(ordered):
        lines.append(f"generator {index} amplitude {format_float(gen.amplitude)}")
        lines += [
            f"{format_float(t.coeff)} {t.string.letters}" for t in gen.paulis.terms
        ]
    return "\n".join(lines) + "\n"


def write_generators(
    generators: Sequence[ExcitationGenerator], n_qubits: int, electrons: int, path
) -> None:
    with open(path, "w") as fh:
        fh.write(render_generators(generators, n_qubits, electrons))


def parse_generators(text: str) -> tuple[list[ExcitationGenerator], int, int]:
    """Parse the generator format; returns (generators, n_qubits, electrons)."""
    lines = []
    for raw in text.splitlines():
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append(stripped)
    if len(lines) < 2:
        raise GeneratorFormatError("header truncated")
    n_qubits = _expect_header(lines[0], "qubits")
    electrons = _expect_header(lines[1], "electrons")
    generators: list[ExcitationGenerator] = []
    amplitude: float | None = None
    pairs: list[tuple[float, PauliString]] = []

    def flush():
        if amplitude is None:
            return
        if not pairs:
            raise GeneratorFormatError("generator block without Pauli terms")
        generators.append(
            ExcitationGenerator(PauliSum.from_pairs(n_qubits, pairs), amplitude)
        )

    for line in lines[2:]:
        parts = line.split()
        if parts[0] == "generator":
            if len(parts) != 4 or parts[2] != "amplitude":
                raise GeneratorFormatError(
                    f"expected 'generator <i> amplitude <a>', got {line!r}"
                )
            flush()
            amplitude = float(parts[3])
            pairs = []
        else:
            if amplitude is None:
                raise GeneratorFormatError(f"term line before any generator: {line!r}")
            if len(parts) != 2:
                raise GeneratorFormatError(f"expected '<g> <paulis>', got {line!r}")
            pairs.append((float(parts[0]), parse_pauli(parts[1], n_qubits)))
    flush()
    return generators, n_qubits, electrons


def read_generators(path) -> tuple[list[ExcitationGenerator], int, int]:
    with open(path) as fh:
        return parse_generators(fh.read())


def _expect_header(line: str, key: str) -> int:
    parts = line.split()
    if len(parts) != 2 or parts[0] != key:
        raise GeneratorFormatError(f"expected '{key} <int>', got {line!r}")
    return int(parts[1])
