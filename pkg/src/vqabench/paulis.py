"""Pauli strings and real-weighted Pauli sums.

Strings are stored as a pair of bit-masks ``(x, z)`` with qubit ``q``
mapped to bit ``q``; the operator encoded is ``i^{|x&z|} X^x Z^z`` so
that ``(1, 1)`` on a qubit is exactly ``Y``. The mask form gives O(1)
products and cheap dense/statevector actions downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

PRUNE_TOL = 1e-12

_LETTER_TO_XZ = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_XZ_TO_LETTER = {v: k for k, v in _LETTER_TO_XZ.items()}
_PHASES = (1 + 0j, 1j, -1 + 0j, -1j)


class PauliParseError(ValueError):
    """Malformed Pauli text (wrong length or character)."""


class PauliSizeError(ValueError):
    """Operands act on different qubit counts."""


@dataclass(frozen=True)
class PauliString:
    """Tensor product of I/X/Y/Z on ``n_qubits`` qubits, mask-encoded."""

    n_qubits: int
    x: int = 0
    z: int = 0

    def __post_init__(self):
        if self.n_qubits <= 0:
            raise ValueError(f"n_qubits must be positive, got {self.n_qubits}")
        mask = (1 << self.n_qubits) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValueError("mask bits outside the qubit range")

    @property
    def letters(self) -> str:
        return "".join(
            _XZ_TO_LETTER[(self.x >> q & 1, self.z >> q & 1)]
            for q in range(self.n_qubits)
        )

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    @property
    def weight(self) -> int:
        """Number of non-identity letters."""
        return (self.x | self.z).bit_count()

    def __str__(self):
        return self.letters

    def sort_key(self) -> str:
        """Canonical term order: plain lexicographic on the letter string."""
        return self.letters


def identity_string(n_qubits: int) -> PauliString:
    return PauliString(n_qubits, 0, 0)


def parse_pauli(text: str, n_qubits: int) -> PauliString:
    """Parse a letter string like ``"XZYI"`` (qubit 0 first)."""
    if len(text) != n_qubits:
        raise PauliParseError(
            f"expected {n_qubits} letters, got {len(text)} in {text!r}"
        )
    x = z = 0
    for pos, ch in enumerate(text):
        try:
            xq, zq = _LETTER_TO_XZ[ch]
        except KeyError:
            raise PauliParseError(
                f"invalid character {ch!r} at position {pos} in {text!r}"
            ) from None
        x |= xq << pos
        z |= zq << pos
    return PauliString(n_qubits, x, z)


def multiply(a: PauliString, b: PauliString) -> tuple[complex, PauliString]:
    """Operator product ``a @ b`` as ``(phase, string)`` with phase in {1, i, -1, -i}."""
    if a.n_qubits != b.n_qubits:
        raise PauliSizeError(
            f"size mismatch: {a.n_qubits} vs {b.n_qubits} qubits"
        )
    x3 = a.x ^ b.x
    z3 = a.z ^ b.z
    # i^{|x&z|} bookkeeping for the Y letters plus the X^x Z^z reorder sign.
    e = (
        (a.x & a.z).bit_count()
        + (b.x & b.z).bit_count()
        - (x3 & z3).bit_count()
        + 2 * (a.z & b.x).bit_count()
    ) % 4
    return _PHASES[e], PauliString(a.n_qubits, x3, z3)


def commutes(a: PauliString, b: PauliString) -> bool:
    if a.n_qubits != b.n_qubits:
        raise PauliSizeError(
            f"size mismatch: {a.n_qubits} vs {b.n_qubits} qubits"
        )
    return ((a.x & b.z).bit_count() + (a.z & b.x).bit_count()) % 2 == 0


@dataclass(frozen=True)
class PauliTerm:
    """One real-weighted Pauli string."""

    coeff: float
    string: PauliString

    def __post_init__(self):
        if not math.isfinite(self.coeff):
            raise ValueError(f"non-finite coefficient {self.coeff}")


@dataclass(frozen=True)
class PauliSum:
    """Canonicalized real linear combination of non-identity Pauli strings.

    The identity component is kept apart in ``identity_coeff``; stored
    terms are unique, sorted lexicographically on their letter strings,
    and pruned below ``prune_tol``. Hermiticity is implied by the real
    coefficients. Instances are immutable; ``add_term`` returns a new sum.
    """

    n_qubits: int
    terms: tuple[PauliTerm, ...] = ()
    identity_coeff: float = 0.0
    prune_tol: float = PRUNE_TOL

    @staticmethod
    def from_pairs(
        n_qubits: int,
        pairs: Iterable[tuple[float, PauliString]],
        identity_coeff: float = 0.0,
        prune_tol: float = PRUNE_TOL,
    ) -> "PauliSum":
        acc: dict[tuple[int, int], float] = {}
        ident = identity_coeff
        for coeff, string in pairs:
            if string.n_qubits != n_qubits:
                raise PauliSizeError(
                    f"term on {string.n_qubits} qubits added to a "
                    f"{n_qubits}-qubit sum"
                )
            if string.is_identity:
                ident += coeff
            else:
                key = (string.x, string.z)
                acc[key] = acc.get(key, 0.0) + coeff
        terms = tuple(
            sorted(
                (
                    PauliTerm(c, PauliString(n_qubits, x, z))
                    for (x, z), c in acc.items()
                    if abs(c) > prune_tol
                ),
                key=lambda t: t.string.sort_key(),
            )
        )
        return PauliSum(n_qubits, terms, ident, prune_tol)

    def add_term(self, term: PauliTerm) -> "PauliSum":
        pairs = [(t.coeff, t.string) for t in self.terms]
        pairs.append((term.coeff, term.string))
        return PauliSum.from_pairs(
            self.n_qubits, pairs, self.identity_coeff, self.prune_tol
        )

    def combine(self, other: "PauliSum") -> "PauliSum":
        if other.n_qubits != self.n_qubits:
            raise PauliSizeError(
                f"size mismatch: {self.n_qubits} vs {other.n_qubits} qubits"
            )
        pairs = [(t.coeff, t.string) for t in self.terms]
        pairs += [(t.coeff, t.string) for t in other.terms]
        return PauliSum.from_pairs(
            self.n_qubits,
            pairs,
            self.identity_coeff + other.identity_coeff,
            self.prune_tol,
        )

    def scaled(self, factor: float) -> "PauliSum":
        return PauliSum.from_pairs(
            self.n_qubits,
            [(factor * t.coeff, t.string) for t in self.terms],
            factor * self.identity_coeff,
            self.prune_tol,
        )

    def allclose(self, other: "PauliSum", tol: float = 1e-10) -> bool:
        if self.n_qubits != other.n_qubits:
            return False
        if abs(self.identity_coeff - other.identity_coeff) > tol:
            return False
        mine = {(t.string.x, t.string.z): t.coeff for t in self.terms}
        theirs = {(t.string.x, t.string.z): t.coeff for t in other.terms}
        for key in mine.keys() | theirs.keys():
            if abs(mine.get(key, 0.0) - theirs.get(key, 0.0)) > tol:
                return False
        return True

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    def coefficient_norms(self) -> tuple[float, float]:
        """(sum |c_i|, sum c_i^2) over the non-identity terms."""
        abs_sum = sum(abs(t.coeff) for t in self.terms)
        sq_sum = sum(t.coeff * t.coeff for t in self.terms)
        return abs_sum, sq_sum

    def __iter__(self) -> Iterator[PauliTerm]:
        return iter(self.terms)


# ---------------------------------------------------------------------------
# Hamiltonian text format
#
#   qubits <n>
#   electrons <k>
#   identity <c0>
#   <coeff> <paulistring>     (one line per term, canonical order)
#
# '#' starts a comment. Coefficients are written with 17 significant
# digits (lowercase e-notation), which round-trips float64 exactly.
# ---------------------------------------------------------------------------

def format_float(value: float) -> str:
    return f"{value:.16e}"


def write_hamiltonian(h: PauliSum, electrons: int, path) -> None:
    with open(path, "w") as fh:
        fh.write(render_hamiltonian(h, electrons))


def render_hamiltonian(h: PauliSum, electrons: int) -> str:
    lines = [
        f"qubits {h.n_qubits}",
        f"electrons {electrons}",
        f"identity {format_float(h.identity_coeff)}",
    ]
    lines += [f"{format_float(t.coeff)} {t.string.letters}" for t in h.terms]
    return "\n".join(lines) + "\n"


class HamiltonianFormatError(ValueError):
    pass


def parse_hamiltonian(text: str) -> tuple[PauliSum, int]:
    """Parse the Hamiltonian text format; returns (sum, electron count)."""
    lines = []
    for raw in text.splitlines():
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append(stripped)
    if len(lines) < 3:
        raise HamiltonianFormatError("header truncated (need 3 header lines)")
    n_qubits = _header_int(lines[0], "qubits")
    electrons = _header_int(lines[1], "electrons")
    if not lines[2].startswith("identity "):
        raise HamiltonianFormatError(f"expected 'identity <c0>', got {lines[2]!r}")
    identity_coeff = float(lines[2].split(maxsplit=1)[1])
    pairs = []
    for line in lines[3:]:
        parts = line.split()
        if len(parts) != 2:
            raise HamiltonianFormatError(f"expected '<coeff> <paulis>', got {line!r}")
        pairs.append((float(parts[0]), parse_pauli(parts[1], n_qubits)))
    return PauliSum.from_pairs(n_qubits, pairs, identity_coeff), electrons


def read_hamiltonian(path) -> tuple[PauliSum, int]:
    with open(path) as fh:
        return parse_hamiltonian(fh.read())


def _header_int(line: str, key: str) -> int:
    parts = line.split()
    if len(parts) != 2 or parts[0] != key:
        raise HamiltonianFormatError(f"expected '{key} <int>', got {line!r}")
    try:
        value = int(parts[1])
    except ValueError:
        raise HamiltonianFormatError(f"expected '{key} <int>', got {line!r}") from None
    if value < 0:
        raise HamiltonianFormatError(f"{key} must be non-negative, got {value}")
    return value
