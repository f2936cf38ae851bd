import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import pauli_matrix
from vqabench.paulis import (
    HamiltonianFormatError,
    PauliParseError,
    PauliSizeError,
    PauliString,
    PauliSum,
    PauliTerm,
    commutes,
    identity_string,
    multiply,
    parse_pauli,
    parse_hamiltonian,
    render_hamiltonian,
)


def test_parse_identity():
    p = parse_pauli("IIII", 4)
    assert p.is_identity
    assert p.letters == "IIII"


def test_parse_positions():
    p = parse_pauli("XZYI", 4)
    assert p.letters == "XZYI"
    assert p.x == 0b101  # X on qubit 0, Y on qubit 2
    assert p.z == 0b110  # Z on qubit 1, Y on qubit 2


def test_parse_wrong_length():
    with pytest.raises(PauliParseError, match="4"):
        parse_pauli("XZ", 4)


def test_parse_bad_character_names_position():
    with pytest.raises(PauliParseError, match="position 2"):
        parse_pauli("XZWI", 4)


def test_multiply_xy():
    phase, product = multiply(parse_pauli("X", 1), parse_pauli("Y", 1))
    assert phase == 1j
    assert product.letters == "Z"


def test_multiply_involution():
    phase, product = multiply(parse_pauli("Z", 1), parse_pauli("Z", 1))
    assert phase == 1
    assert product.is_identity


def test_multiply_disjoint_supports():
    phase, product = multiply(parse_pauli("XI", 2), parse_pauli("IY", 2))
    assert phase == 1
    assert product.letters == "XY"


def test_multiply_size_mismatch():
    with pytest.raises(PauliSizeError):
        multiply(parse_pauli("X", 1), parse_pauli("XX", 2))


letters_st = st.text(alphabet="IXYZ", min_size=1, max_size=6)


@given(st.data(), st.integers(min_value=1, max_value=5))
@settings(max_examples=200, deadline=None)
def test_multiply_matches_matrix_oracle(data, n):
    a = parse_pauli(data.draw(st.text("IXYZ", min_size=n, max_size=n)), n)
    b = parse_pauli(data.draw(st.text("IXYZ", min_size=n, max_size=n)), n)
    phase, product = multiply(a, b)
    lhs = pauli_matrix(a.letters) @ pauli_matrix(b.letters)
    rhs = phase * pauli_matrix(product.letters)
    assert np.allclose(lhs, rhs)


@given(st.data(), st.integers(min_value=1, max_value=4))
@settings(max_examples=100, deadline=None)
def test_multiply_associative(data, n):
    strings = [
        parse_pauli(data.draw(st.text("IXYZ", min_size=n, max_size=n)), n)
        for _ in range(3)
    ]
    a, b, c = strings
    p1, ab = multiply(a, b)
    p2, ab_c = multiply(ab, c)
    q1, bc = multiply(b, c)
    q2, a_bc = multiply(a, bc)
    assert ab_c == a_bc
    assert p1 * p2 == q1 * q2


@given(st.data(), st.integers(min_value=1, max_value=6))
@settings(max_examples=100, deadline=None)
def test_multiply_self_is_identity(data, n):
    a = parse_pauli(data.draw(st.text("IXYZ", min_size=n, max_size=n)), n)
    phase, product = multiply(a, a)
    assert phase == 1
    assert product.is_identity


@given(st.integers(min_value=1, max_value=6), st.data())
@settings(max_examples=100, deadline=None)
def test_parse_render_roundtrip(n, data):
    text = data.draw(st.text("IXYZ", min_size=n, max_size=n))
    assert parse_pauli(text, n).letters == text


def test_add_term_basic():
    empty = PauliSum(2)
    s = empty.add_term(PauliTerm(0.5, parse_pauli("ZI", 2)))
    assert s.n_terms == 1
    assert s.terms[0].coeff == 0.5
    assert s.identity_coeff == 0.0


def test_add_term_cancellation_prunes():
    s = PauliSum(2).add_term(PauliTerm(0.5, parse_pauli("ZI", 2)))
    s = s.add_term(PauliTerm(-0.5, parse_pauli("ZI", 2)))
    assert s.n_terms == 0


def test_add_term_identity_routing():
    s = PauliSum(2).add_term(PauliTerm(0.3, parse_pauli("II", 2)))
    assert s.n_terms == 0
    assert s.identity_coeff == 0.3


def test_add_term_size_mismatch():
    with pytest.raises(PauliSizeError):
        PauliSum(2).add_term(PauliTerm(1.0, parse_pauli("X", 1)))


def test_canonical_order_is_lexicographic():
    pairs = [
        (1.0, parse_pauli("ZZ", 2)),
        (2.0, parse_pauli("IX", 2)),
        (3.0, parse_pauli("XI", 2)),
    ]
    s = PauliSum.from_pairs(2, pairs)
    assert [t.string.letters for t in s.terms] == ["IX", "XI", "ZZ"]


# dyadic coefficients make float addition order-independent, so the
# canonicalization property can demand exact equality
dyadic = st.integers(min_value=-64, max_value=64).map(lambda k: k / 16.0)


@given(
    st.lists(
        st.tuples(dyadic, st.text("IXYZ", min_size=3, max_size=3)),
        min_size=0,
        max_size=10,
    ),
    st.randoms(),
)
@settings(max_examples=100, deadline=None)
def test_sum_order_independent(pairs, rnd):
    built = [(c, parse_pauli(text, 3)) for c, text in pairs]
    shuffled = list(built)
    rnd.shuffle(shuffled)
    assert PauliSum.from_pairs(3, built) == PauliSum.from_pairs(3, shuffled)


def test_commutes_agrees_with_oracle():
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = int(rng.integers(1, 5))
        a = parse_pauli("".join(rng.choice(list("IXYZ"), n)), n)
        b = parse_pauli("".join(rng.choice(list("IXYZ"), n)), n)
        ma, mb = pauli_matrix(a.letters), pauli_matrix(b.letters)
        assert commutes(a, b) == np.allclose(ma @ mb, mb @ ma)


def test_hamiltonian_format_roundtrip():
    pairs = [
        (0.5, parse_pauli("XXI", 3)),
        (-1.25e-3, parse_pauli("ZZZ", 3)),
        (7.0, parse_pauli("IYI", 3)),
    ]
    h = PauliSum.from_pairs(3, pairs, identity_coeff=0.125)
    text = render_hamiltonian(h, electrons=2)
    h2, electrons = parse_hamiltonian(text)
    assert electrons == 2
    assert h2 == h
    assert render_hamiltonian(h2, 2) == text  # bit-exact round trip


def test_hamiltonian_format_comments_and_errors():
    text = "qubits 1\nelectrons 0\nidentity 0.0\n# comment\n0.5 Z\n"
    h, _ = parse_hamiltonian(text)
    assert h.n_terms == 1
    with pytest.raises(HamiltonianFormatError):
        parse_hamiltonian("qubits 1\nidentity 0.0\n")
    with pytest.raises(HamiltonianFormatError):
        parse_hamiltonian("qubits 1\nelectrons 0\nidentity 0.0\nbroken line here\n")


def test_identity_string_helper():
    assert identity_string(5).letters == "IIIII"
