"""Symbolic Pauli arithmetic against explicit matrix oracles."""

import numpy as np
import pytest

import zeno_bench as zb

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])
SINGLE = {"I": np.eye(2), "X": SIGMA_X, "Y": SIGMA_Y, "Z": SIGMA_Z}


def dense(label, phase=1.0):
    """Independent matrix construction, qubit 0 as the leftmost factor."""
    out = np.array([[phase]])
    for ch in label:
        out = np.kron(out, SINGLE[ch])
    return out


def test_parse_round_trip():
    for label in ("I", "X", "ZZI", "XYZ", "IIIII"):
        p = zb.pauli_from_string(label)
        assert p.n == len(label)
        assert str(p) == label


def test_parse_rejects_bad_character():
    with pytest.raises(zb.PauliParseError) as err:
        zb.pauli_from_string("XQZ")
    assert err.value.position == 1


def test_parse_rejects_empty():
    with pytest.raises(zb.PauliParseError):
        zb.pauli_from_string("")


def test_to_matrix_matches_kron():
    for label in ("X", "Z", "XY", "ZZI", "IXYZ"):
        got = zb.to_matrix(zb.pauli_from_string(label))
        np.testing.assert_array_equal(got, dense(label))


def test_qubit_zero_is_leftmost_factor():
    got = zb.to_matrix(zb.pauli_from_string("XI"))
    np.testing.assert_array_equal(got, np.kron(SIGMA_X, np.eye(2)))


def test_multiplication_table_single_qubit():
    cases = [
        ("X", "Z", -1j, "Y"),
        ("Z", "X", 1j, "Y"),
        ("Y", "X", -1j, "Z"),
        ("X", "Y", 1j, "Z"),
        ("Z", "Y", -1j, "X"),
        ("Y", "Z", 1j, "X"),
        ("X", "X", 1.0, "I"),
        ("Y", "Y", 1.0, "I"),
        ("Z", "Z", 1.0, "I"),
    ]
    for a, b, phase, want in cases:
        product = zb.multiply(zb.pauli_from_string(a), zb.pauli_from_string(b))
        assert product.phase == phase, (a, b)
        assert product.label() == want, (a, b)


def test_multiplication_known_products():
    zz_xx = zb.multiply(zb.pauli_from_string("ZZ"), zb.pauli_from_string("XX"))
    assert zz_xx.phase == -1.0
    assert (zz_xx.x_bits, zz_xx.z_bits) == ((1, 1), (1, 1))

    p = zb.multiply(zb.pauli_from_string("XYZ"), zb.pauli_from_string("ZZI"))
    assert p.phase == 1.0
    np.testing.assert_allclose(
        zb.to_matrix(p),
        dense("XYZ") @ dense("ZZI"),
        atol=1e-15,
    )


def test_multiply_matches_matrices_randomized():
    rng = np.random.default_rng(11)
    for _ in range(300):
        n = int(rng.integers(1, 5))
        a = zb.PauliOperator(
            n,
            tuple(int(b) for b in rng.integers(0, 2, n)),
            tuple(int(b) for b in rng.integers(0, 2, n)),
            int(rng.integers(0, 4)),
        )
        b = zb.PauliOperator(
            n,
            tuple(int(v) for v in rng.integers(0, 2, n)),
            tuple(int(v) for v in rng.integers(0, 2, n)),
            int(rng.integers(0, 4)),
        )
        direct = zb.to_matrix(a) @ zb.to_matrix(b)
        symbolic = zb.to_matrix(zb.multiply(a, b))
        np.testing.assert_allclose(direct, symbolic, atol=1e-14)


def test_squares_are_plus_minus_identity():
    rng = np.random.default_rng(12)
    for _ in range(200):
        n = int(rng.integers(1, 6))
        p = zb.PauliOperator(
            n,
            tuple(int(b) for b in rng.integers(0, 2, n)),
            tuple(int(b) for b in rng.integers(0, 2, n)),
            int(rng.integers(0, 4)),
        )
        square = zb.multiply(p, p)
        assert square.x_bits == (0,) * n
        assert square.z_bits == (0,) * n
        assert square.phase in (1.0, -1.0)


def test_commutes_matches_matrix_commutator():
    rng = np.random.default_rng(13)
    for _ in range(200):
        n = int(rng.integers(1, 5))
        a = zb.PauliOperator(
            n,
            tuple(int(b) for b in rng.integers(0, 2, n)),
            tuple(int(b) for b in rng.integers(0, 2, n)),
            0,
        )
        b = zb.PauliOperator(
            n,
            tuple(int(v) for v in rng.integers(0, 2, n)),
            tuple(int(v) for v in rng.integers(0, 2, n)),
            0,
        )
        A, B = zb.to_matrix(a), zb.to_matrix(b)
        assert zb.commutes(a, b) == bool(
            np.max(np.abs(A @ B - B @ A)) < 1e-12
        )


def test_identity_is_multiplicative_unit():
    p = zb.pauli_from_string("XYZ")
    e = zb.identity(3)
    assert zb.multiply(e, p) == p
    assert zb.multiply(p, e) == p


def test_multiply_rejects_mismatched_sizes():
    with pytest.raises(zb.DimensionError):
        zb.multiply(zb.pauli_from_string("X"), zb.pauli_from_string("XX"))


def test_dense_cap():
    p = zb.identity(13)
    with pytest.raises(zb.CapacityError):
        zb.to_matrix(p)


def test_hermitian_flag():
    assert zb.pauli_from_string("XYZ").is_hermitian
    y = zb.pauli_from_string("Y")
    iy = zb.PauliOperator(1, y.x_bits, y.z_bits, (y.phase_power + 1) % 4)
    assert not iy.is_hermitian
