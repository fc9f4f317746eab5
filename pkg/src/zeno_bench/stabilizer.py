"""Stabilizer codes, their group structure, and Hamiltonian decomposition.

A code is built from a list of commuting, independent, Hermitian generators
with phase +1.  The full group is enumerated through the label isomorphism

    B(b_1 .. b_Qbar) = prod_j  S_j ^ b_j,

with the integer label's bit j (least significant first) holding b_j.  The
pairing sigma_g(S) = <B^-1(g), B^-1(S)> mod 2 drives everything else: the
operator space splits into sectors W_g on which every S acts by conjugation
as the sign (-1)^sigma_g(S), and a Hamiltonian term's sector is read off from
which generators it anticommutes with.
"""

from dataclasses import dataclass

import numpy as np

from . import pauli_algebra as pa
from .errors import (
    AssumptionViolationError,
    CapacityError,
    DimensionError,
    InvalidCodeError,
    MembershipError,
    ModelError,
    PhaseError,
    RankError,
    VerificationError,
)

GROUP_ENUMERATION_CAP = 16  # max generators for group enumeration
PROJECTOR_GROUP_CAP = 10  # max generators for dense projector application
NORM_TOLERANCE = 1e-10  # default absolute tolerance on operator norms


def _gf2_rank(rows):
    """Rank over GF(2) of bitmask rows; also reports a dependent row index."""
    pivots = []
    for idx, row in enumerate(rows):
        r = row
        for p in pivots:
            r = min(r, r ^ p)
        if r == 0:
            return len(pivots), idx
        pivots.append(r)
    return len(pivots), None


class StabilizerCode:
    """Validated code: generators, enumerated group, and label bookkeeping.

    Immutable after construction; use :func:`build_code`.
    """

    def __init__(self, generators):
        if len(generators) == 0:
            raise InvalidCodeError("generator list is empty")
        n = generators[0].n
        for j, g in enumerate(generators):
            if g.n != n:
                raise DimensionError(
                    f"generator {j} acts on {g.n} qubits, expected {n}"
                )
            if g.phase_power != 0:
                raise PhaseError(
                    f"generator {j} ({g}) must have phase +1"
                )
            if g.is_identity_string:
                raise RankError(f"generator {j} is the identity")
        for i in range(len(generators)):
            for j in range(i + 1, len(generators)):
                if not pa.commutes(generators[i], generators[j]):
                    raise InvalidCodeError(
                        f"generators {i} ({generators[i]}) and "
                        f"{j} ({generators[j]}) anticommute"
                    )
        rows = []
        for g in generators:
            bits = 0
            for b in list(g.x_bits) + list(g.z_bits):
                bits = (bits << 1) | b
            rows.append(bits)
        rank, dependent = _gf2_rank(rows)
        if rank < len(generators):
            raise RankError(
                f"generator {dependent} ({generators[dependent]}) is a product "
                f"of earlier generators (GF(2) rank {rank} < {len(generators)})"
            )
        q_bar = len(generators)
        if q_bar > GROUP_ENUMERATION_CAP:
            raise CapacityError(
                f"group enumeration capped at {GROUP_ENUMERATION_CAP} "
                f"generators, got {q_bar}"
            )

        self.n = n
        self.generators = tuple(generators)
        self.Q_bar = q_bar
        self.Q = 2**q_bar - 1
        self.q = (self.Q + 1) // 2
        self.k = n - q_bar

        group = []
        for label in range(2**q_bar):
            element = pa.identity(n)
            for j in range(q_bar):
                if (label >> j) & 1:
                    element = pa.multiply(element, generators[j])
            if not element.is_hermitian:
                raise PhaseError(
                    f"enumerated element {label} ({element}) is not Hermitian"
                )
            if element.is_identity_string and element.phase_power != 0:
                raise PhaseError("the group contains -1 times the identity")
            group.append(element)
        self.group = tuple(group)
        self._label_of = {
            (g.x_bits, g.z_bits, g.phase_power): lab
            for lab, g in enumerate(group)
        }
        if len(self._label_of) != len(group):
            raise RankError("enumerated group elements are not distinct")
        self._system_matrices = {}

    def label_of(self, element):
        """Integer label of a group element (accepts a label unchanged)."""
        if isinstance(element, (int, np.integer)):
            label = int(element)
            if not 0 <= label <= self.Q:
                raise MembershipError(f"label {label} outside 0..{self.Q}")
            return label
        key = (element.x_bits, element.z_bits, element.phase_power)
        if key not in self._label_of:
            raise MembershipError(f"{element} is not in the stabilizer group")
        return self._label_of[key]

    def element(self, label):
        return self.group[self.label_of(label)]

    def system_matrix(self, label):
        """Dense matrix of a group element on the system factor (cached)."""
        label = self.label_of(label)
        if label not in self._system_matrices:
            self._system_matrices[label] = pa.to_matrix(self.group[label])
        return self._system_matrices[label]

    def __repr__(self):
        gens = ",".join(str(g) for g in self.generators)
        return f"StabilizerCode(n={self.n}, k={self.k}, generators=[{gens}])"


def build_code(generators):
    """Validate a generator list and enumerate the stabilizer group."""
    return StabilizerCode(list(generators))


def sigma(code, g, S):
    """The pairing sigma_g(S): parity of the generators shared by g and S."""
    label_g = code.label_of(g)
    label_s = code.label_of(S)
    return bin(label_g & label_s).count("1") % 2


def _split_joint(code, A):
    """Check A lives on system (x) bath and return (system_dim, bath_dim)."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    ds = 2**code.n
    if A.shape[0] % ds != 0:
        raise DimensionError(
            f"matrix dimension {A.shape[0]} is not a multiple of 2^n = {ds}"
        )
    return ds, A.shape[0] // ds


def conjugate_by_element(code, label, A):
    """(S (x) 1_B) A (S (x) 1_B) without forming the Kronecker product."""
    ds, db = _split_joint(code, A)
    S = code.system_matrix(label)
    A4 = np.asarray(A, dtype=complex).reshape(ds, db, ds, db)
    out = np.einsum("ij,jalb,lk->iakb", S, A4, S)
    return out.reshape(ds * db, ds * db)


def apply_isotypical_projector(code, g, A):
    """Project A onto the sector W_g: average of (-1)^sigma_g(S) * S A S."""
    if code.Q_bar > PROJECTOR_GROUP_CAP:
        raise CapacityError(
            f"dense projector application capped at {PROJECTOR_GROUP_CAP} "
            f"generators, got {code.Q_bar}"
        )
    label_g = code.label_of(g)
    ds, db = _split_joint(code, A)
    A4 = np.asarray(A, dtype=complex).reshape(ds, db, ds, db)
    acc = np.zeros_like(A4)
    for label_s in range(code.Q + 1):
        sign = -1.0 if sigma(code, label_g, label_s) else 1.0
        S = code.system_matrix(label_s)
        acc += sign * np.einsum("ij,jalb,lk->iakb", S, A4, S)
    return (acc / (code.Q + 1)).reshape(ds * db, ds * db)


def codespace_projector(code):
    """Projector onto the joint +1 eigenspace of all generators (system only)."""
    ds = 2**code.n
    proj = np.eye(ds, dtype=complex)
    for j, g in enumerate(code.generators):
        proj = proj @ ((np.eye(ds) + pa.to_matrix(g)) / 2.0)
    return proj


@dataclass(frozen=True)
class ProfileSegment:
    """One piecewise-constant scaling window [t0, t1) of a Hamiltonian term."""

    t0: float
    t1: float
    scale: float


class HamiltonianTerm:
    """One (system Pauli) (x) (dense bath operator) term, optionally profiled."""

    def __init__(self, system, bath, profile=None, index=None):
        self.system = system
        self.index = index
        bath = np.asarray(bath, dtype=complex)
        if bath.ndim != 2 or bath.shape[0] != bath.shape[1]:
            raise DimensionError(
                f"term {index}: bath operator must be square, got {bath.shape}"
            )
        if not system.is_hermitian:
            raise ModelError(
                f"term {index}: system operator {system} is not Hermitian"
            )
        if np.max(np.abs(bath - bath.conj().T)) > 1e-12:
            raise ModelError(f"term {index}: bath operator is not Hermitian")
        self.bath = bath
        if profile is not None:
            segments = sorted(profile, key=lambda s: s.t0)
            for s in segments:
                if not (s.t1 > s.t0):
                    raise ModelError(
                        f"term {index}: profile segment has t1 <= t0 ({s})"
                    )
            for a, b in zip(segments, segments[1:]):
                if b.t0 < a.t1 - 1e-15:
                    raise ModelError(
                        f"term {index}: profile segments overlap ({a} and {b})"
                    )
            profile = tuple(segments)
        self.profile = profile

    def scale_at(self, t):
        if self.profile is None:
            return 1.0
        for s in self.profile:
            if s.t0 <= t < s.t1:
                return s.scale
        return 0.0


class HamiltonianSpec:
    """Sum of (system Pauli) (x) (bath operator) terms on n qubits and a bath."""

    def __init__(self, n, bath_dim, terms):
        if bath_dim < 1:
            raise DimensionError(f"bath_dim must be positive, got {bath_dim}")
        self.n = n
        self.bath_dim = bath_dim
        checked = []
        for j, term in enumerate(terms):
            if not isinstance(term, HamiltonianTerm):
                system, bath = term[0], term[1]
                profile = term[2] if len(term) > 2 else None
                term = HamiltonianTerm(system, bath, profile, index=j)
            if term.system.n != n:
                raise DimensionError(
                    f"term {j}: system operator acts on {term.system.n} "
                    f"qubits, expected {n}"
                )
            if term.bath.shape[0] != bath_dim:
                raise DimensionError(
                    f"term {j}: bath operator has dimension "
                    f"{term.bath.shape[0]}, expected {bath_dim}"
                )
            checked.append(term)
        self.terms = tuple(checked)

    @property
    def joint_dim(self):
        return 2**self.n * self.bath_dim

    def breakpoints(self):
        """Sorted unique profile boundaries; empty for time-independent terms."""
        points = set()
        for term in self.terms:
            if term.profile is not None:
                for s in term.profile:
                    points.add(s.t0)
                    points.add(s.t1)
        return sorted(points)

    @property
    def is_time_dependent(self):
        return any(term.profile is not None for term in self.terms)

    def matrix(self, t=0.0, which=None):
        """Dense joint-space Hamiltonian at time t.

        ``which`` restricts to a subset of term indices (None = all terms).
        """
        dim = self.joint_dim
        H = np.zeros((dim, dim), dtype=complex)
        for j, term in enumerate(self.terms):
            if which is not None and j not in which:
                continue
            scale = term.scale_at(t)
            if scale == 0.0:
                continue
            H += scale * np.kron(pa.to_matrix(term.system), term.bath)
        return H


def _segment_times(hspec, horizon=None):
    """Representative times, one per piecewise-constant segment."""
    points = hspec.breakpoints()
    if horizon is not None:
        points = sorted(set(points) | {0.0, float(horizon)})
    if not points:
        return [0.0]
    times = []
    if points[0] > 0.0:
        times.append(points[0] / 2.0)
    for a, b in zip(points, points[1:]):
        times.append((a + b) / 2.0)
    times.append(points[-1] + 1.0)  # trailing region
    return times


def _spectral_norm(H):
    if H.size == 0 or not np.any(H):
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvalsh(H))))


def _bath_proportional_identity(bath, tol):
    d = bath.shape[0]
    mean = np.trace(bath) / d
    return _spectral_norm(bath - mean * np.eye(d)) <= tol


class HamiltonianDecomposition:
    """Sector-resolved Hamiltonian with the rates J0 and J1.

    Each term is assigned the group label whose sector it lies in (bit j set
    iff the system Pauli anticommutes with generator j).  J0 and J1 are twice
    the worst-case spectral norms of the label-0 part and the rest, maximized
    over the piecewise-constant time segments.
    """

    def __init__(self, code, hspec, tol=NORM_TOLERANCE):
        if hspec.n != code.n:
            raise DimensionError(
                f"Hamiltonian acts on {hspec.n} qubits, code on {code.n}"
            )
        self.code = code
        self.hspec = hspec
        labels = []
        for j, term in enumerate(hspec.terms):
            label = 0
            for gen_index, g in enumerate(code.generators):
                if not pa.commutes(term.system, g):
                    label |= 1 << gen_index
            if (
                label == 0
                and not term.system.is_identity_string
                and not _bath_proportional_identity(term.bath, tol)
            ):
                raise AssumptionViolationError(
                    f"term {j} ({term.system} (x) bath) commutes with every "
                    "stabilizer generator yet couples the system to the bath; "
                    "the code cannot detect it"
                )
            labels.append(label)
        self.term_labels = tuple(labels)
        times = _segment_times(hspec)
        identity_terms = {j for j, lab in enumerate(labels) if lab == 0}
        sb_terms = {j for j, lab in enumerate(labels) if lab != 0}
        self._identity_terms = identity_terms
        self._sb_terms = sb_terms
        self.J0 = 2.0 * max(
            _spectral_norm(hspec.matrix(t, which=identity_terms)) for t in times
        )
        self.J1 = 2.0 * max(
            _spectral_norm(hspec.matrix(t, which=sb_terms)) for t in times
        )

    def h_identity_matrix(self, t=0.0):
        """The commuting part H_1 (sector label 0) at time t."""
        return self.hspec.matrix(t, which=self._identity_terms)

    def h_sb_matrix(self, t=0.0):
        """The detectable system-bath part (all nonzero labels) at time t."""
        return self.hspec.matrix(t, which=self._sb_terms)

    def h_g_matrix(self, label, t=0.0):
        """The sector-label component H_g at time t."""
        label = self.code.label_of(label)
        which = {j for j, lab in enumerate(self.term_labels) if lab == label}
        return self.hspec.matrix(t, which=which)

    @property
    def labels_present(self):
        return sorted(set(self.term_labels))


def decompose_hamiltonian(code, hspec, tol=NORM_TOLERANCE):
    """Split H into sector components H_g and compute J0, J1.

    Raises AssumptionViolationError when a term couples the system to the
    bath but commutes with the whole stabilizer group (undetectable error).
    """
    return HamiltonianDecomposition(code, hspec, tol=tol)


@dataclass(frozen=True)
class IsotypicalDecomposition:
    """Numerically verified sector dimensions for a code and bath size."""

    code: StabilizerCode
    bath_dim: int
    state_dims: dict  # label -> a_g
    operator_dims: dict  # label -> b_g


def verify_isotypical_dimensions(code, bath_dim):
    """Measure sector dimensions by explicit rank computations.

    a_g is the rank of the syndrome projector
    prod_j (1 + (-1)^{sigma_g(S_j)} S_j)/2 (x) 1_B, and b_g is the rank of
    the sector projector as a linear map on operators.  Both are checked
    against the closed forms a_g = 2^k * bath_dim and
    b_g = 2^(2k + Q_bar) * bath_dim^2.
    """
    ds = 2**code.n
    joint = ds * bath_dim
    if joint > 64:
        raise CapacityError(
            "operator-space rank check needs a dense map on operators; "
            f"capped at joint dimension 64, got {joint}"
        )
    state_dims = {}
    operator_dims = {}
    eye_b = np.eye(bath_dim)
    for label in range(code.Q + 1):
        proj = np.eye(ds, dtype=complex)
        for j, g in enumerate(code.generators):
            sign = -1.0 if sigma(code, label, code.label_of(g)) else 1.0
            proj = proj @ ((np.eye(ds) + sign * pa.to_matrix(g)) / 2.0)
        joint_proj = np.kron(proj, eye_b)
        state_dims[label] = int(np.linalg.matrix_rank(joint_proj, tol=1e-8))

        columns = []
        for i in range(joint):
            for j in range(joint):
                E = np.zeros((joint, joint), dtype=complex)
                E[i, j] = 1.0
                columns.append(apply_isotypical_projector(code, label, E).ravel())
        operator_dims[label] = int(
            np.linalg.matrix_rank(np.array(columns).T, tol=1e-8)
        )

    a_expected = 2**code.k * bath_dim
    b_expected = 2 ** (2 * code.k + code.Q_bar) * bath_dim**2
    for label in range(code.Q + 1):
        if state_dims[label] != a_expected:
            raise VerificationError(
                f"state-space dimension of sector {label} is "
                f"{state_dims[label]}, expected {a_expected}"
            )
        if operator_dims[label] != b_expected:
            raise VerificationError(
                f"operator-space dimension of sector {label} is "
                f"{operator_dims[label]}, expected {b_expected}"
            )
    if sum(state_dims.values()) != ds * bath_dim:
        raise VerificationError(
            "sector state-space dimensions do not sum to the total dimension"
        )
    return IsotypicalDecomposition(code, bath_dim, state_dims, operator_dims)
