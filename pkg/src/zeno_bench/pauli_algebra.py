"""Exact n-qubit Pauli group arithmetic in binary symplectic form.

An operator is encoded as (x_bits, z_bits, phase): the bit vectors give the
tensor factors via

    (0,0) -> I,  (1,0) -> X,  (0,1) -> Z,  (1,1) -> Y,

qubit 0 being the leftmost character of a string label, and ``phase`` is the
unit in front of that I/X/Y/Z string, always one of +1, +i, -1, -i.  All phase
bookkeeping is done on the exponent of i, so group products are exact.
"""

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DimensionError, PauliParseError

# phase is i**k; index k mod 4 into this table
_PHASES = (1 + 0j, 1j, -1 + 0j, -1j)

_CHAR_TO_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_TO_CHAR = {v: k for k, v in _CHAR_TO_BITS.items()}

_PHASE_PREFIXES = {"+1": 0, "+i": 1, "-1": 2, "-i": 3}

_SINGLE_QUBIT = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# dense realization cap (system qubits); 2**12 = 4096
DENSE_QUBIT_CAP = 12


def _phase_index(phase):
    """Map a unit in {1, i, -1, -i} to its exponent of i."""
    for k, value in enumerate(_PHASES):
        if phase == value:
            return k
    raise PauliParseError(f"phase must be one of +1, +i, -1, -i, got {phase!r}")


@dataclass(frozen=True)
class PauliOperator:
    """Immutable n-qubit Pauli operator with exact quarter phase."""

    n: int
    x_bits: tuple
    z_bits: tuple
    phase_power: int  # operator = i**phase_power * sigma-string

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError(f"qubit count must be positive, got {self.n}")
        if len(self.x_bits) != self.n or len(self.z_bits) != self.n:
            raise DimensionError(
                f"bit vectors must have length {self.n}, got "
                f"{len(self.x_bits)} and {len(self.z_bits)}"
            )
        if any(b not in (0, 1) for b in self.x_bits + self.z_bits):
            raise DimensionError("bit vectors must contain only 0 or 1")
        if self.phase_power not in (0, 1, 2, 3):
            raise PauliParseError(
                f"phase exponent must be in 0..3, got {self.phase_power}"
            )

    @property
    def phase(self):
        """The unit in front of the I/X/Y/Z string: one of +1, +i, -1, -i."""
        return _PHASES[self.phase_power]

    @property
    def is_identity_string(self):
        """True when every tensor factor is I (phase may be anything)."""
        return not any(self.x_bits) and not any(self.z_bits)

    @property
    def is_hermitian(self):
        """Sigma strings are Hermitian, so only the phase matters."""
        return self.phase_power in (0, 2)

    def label(self):
        """The I/X/Y/Z string, without the phase."""
        return "".join(
            _BITS_TO_CHAR[(x, z)] for x, z in zip(self.x_bits, self.z_bits)
        )

    def __str__(self):
        prefix = {0: "", 1: "+i", 2: "-1", 3: "-i"}[self.phase_power]
        return prefix + self.label()

    def adjoint(self):
        """Conjugate transpose; sigma strings are Hermitian so only the phase flips."""
        return PauliOperator(self.n, self.x_bits, self.z_bits, (-self.phase_power) % 4)


def identity(n):
    """The identity operator on n qubits."""
    return PauliOperator(n, (0,) * n, (0,) * n, 0)


def pauli_from_string(label, phase=1):
    """Parse a Pauli string such as "XZI" into a PauliOperator.

    Qubit 0 is the leftmost character.  The label may carry one of the phase
    prefixes "+1", "-1", "+i", "-i"; the ``phase`` argument (a unit in
    {1, i, -1, -i}) multiplies on top of any prefix and defaults to +1.
    """
    if not isinstance(label, str) or len(label) == 0:
        raise PauliParseError("label must be a nonempty string")
    power = _phase_index(phase)
    body = label
    if len(label) >= 2 and label[:2] in _PHASE_PREFIXES:
        power = (power + _PHASE_PREFIXES[label[:2]]) % 4
        body = label[2:]
    if len(body) == 0:
        raise PauliParseError(f"label {label!r} has a phase prefix but no operators")
    x_bits = []
    z_bits = []
    offset = len(label) - len(body)
    for pos, ch in enumerate(body):
        if ch not in _CHAR_TO_BITS:
            raise PauliParseError(
                f"invalid character {ch!r} at position {pos + offset} in {label!r}",
                position=pos + offset,
            )
        x, z = _CHAR_TO_BITS[ch]
        x_bits.append(x)
        z_bits.append(z)
    return PauliOperator(len(body), tuple(x_bits), tuple(z_bits), power)


def _check_same_n(p, q):
    if p.n != q.n:
        raise DimensionError(f"operand qubit counts differ: {p.n} != {q.n}")


def multiply(p, q):
    """Exact product pq.

    Writing each operator as phase * i**y * prod_j X^{x_j} Z^{z_j} (y = number
    of Y factors), the XZ-ordered forms multiply with a (-1)^(z_p . x_q)
    reordering sign, and converting back to the sigma-string convention costs
    i**(y_p + y_q - y_pq).
    """
    _check_same_n(p, q)
    x3 = tuple(a ^ b for a, b in zip(p.x_bits, q.x_bits))
    z3 = tuple(a ^ b for a, b in zip(p.z_bits, q.z_bits))
    reorder = sum(zp & xq for zp, xq in zip(p.z_bits, q.x_bits)) % 2
    y1 = sum(x & z for x, z in zip(p.x_bits, p.z_bits))
    y2 = sum(x & z for x, z in zip(q.x_bits, q.z_bits))
    y3 = sum(x & z for x, z in zip(x3, z3))
    power = (p.phase_power + q.phase_power + 2 * reorder + y1 + y2 - y3) % 4
    return PauliOperator(p.n, x3, z3, power)


def commutes(p, q):
    """True iff the symplectic inner product x_p.z_q + z_p.x_q vanishes mod 2."""
    _check_same_n(p, q)
    s = sum(xp & zq for xp, zq in zip(p.x_bits, q.z_bits))
    s += sum(zp & xq for zp, xq in zip(p.z_bits, q.x_bits))
    return s % 2 == 0


def to_matrix(p):
    """Dense 2^n x 2^n complex matrix realization."""
    if p.n > DENSE_QUBIT_CAP:
        raise CapacityError(
            f"dense realization capped at {DENSE_QUBIT_CAP} qubits, got {p.n}"
        )
    m = np.array([[p.phase]], dtype=complex)
    for ch in p.label():
        m = np.kron(m, _SINGLE_QUBIT[ch])
    return m
