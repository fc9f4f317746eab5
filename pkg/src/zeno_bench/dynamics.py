"""Exact density-matrix dynamics and the measurement protocols.

States live on system (x) bath as dense matrices.  Unitary steps are exact:
each piecewise-constant Hamiltonian segment is exponentiated through its
Hermitian eigendecomposition, and for a time-independent Hamiltonian the
single cycle propagator is computed once and reused across all M cycles.

A protocol run alternates free evolution over tau/M with one measurement
round, M times, then compares the reduced system state against the ideal
trajectory generated by the commuting part of the Hamiltonian alone:

    D = (1/2) || rho_S(tau) - rho_S_ideal(tau) ||_1.
"""

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DimensionError, DomainError
from .measurement import make_channel
from .stabilizer import codespace_projector, decompose_hamiltonian

JOINT_DIMENSION_CAP = 4096
STATE_TOLERANCE = 1e-12  # Hermiticity and trace slack for valid states
POSITIVITY_FLOOR = -1e-10  # most negative admissible eigenvalue
SUPPORT_TOLERANCE = 1e-10  # codespace support residual for initial states


@dataclass(frozen=True)
class DensityMatrix:
    """Validated state on a system (x) bath factorization.

    The wrapped array is treated as immutable; operations return new
    instances.
    """

    matrix: np.ndarray
    system_dim: int
    bath_dim: int


def as_density_matrix(state, system_dim, bath_dim, tol=STATE_TOLERANCE):
    """Validate Hermiticity, unit trace, and positivity; wrap the array."""
    if isinstance(state, DensityMatrix):
        if (state.system_dim, state.bath_dim) != (system_dim, bath_dim):
            raise DimensionError(
                f"state factorization ({state.system_dim}, {state.bath_dim}) "
                f"does not match expected ({system_dim}, {bath_dim})"
            )
        matrix = state.matrix
    else:
        matrix = np.asarray(state, dtype=complex)
    dim = system_dim * bath_dim
    if matrix.shape != (dim, dim):
        raise DimensionError(
            f"expected a {dim}x{dim} matrix, got shape {matrix.shape}"
        )
    if dim > JOINT_DIMENSION_CAP:
        raise CapacityError(
            f"joint dimension {dim} exceeds the dense cap {JOINT_DIMENSION_CAP}"
        )
    if np.max(np.abs(matrix - matrix.conj().T)) > tol:
        raise DomainError("density matrix is not Hermitian within tolerance")
    if abs(np.trace(matrix).real - 1.0) > tol or abs(np.trace(matrix).imag) > tol:
        raise DomainError(
            f"density matrix trace is {np.trace(matrix)}, expected 1"
        )
    min_eig = float(np.min(np.linalg.eigvalsh((matrix + matrix.conj().T) / 2)))
    if min_eig < POSITIVITY_FLOOR:
        raise DomainError(
            f"density matrix has eigenvalue {min_eig}, below {POSITIVITY_FLOOR}"
        )
    return DensityMatrix(matrix, system_dim, bath_dim)


def partial_trace_bath(matrix, system_dim, bath_dim):
    """Trace out the bath factor of a joint-space operator."""
    if isinstance(matrix, DensityMatrix):
        matrix = matrix.matrix
    matrix = np.asarray(matrix)
    dim = system_dim * bath_dim
    if matrix.shape != (dim, dim):
        raise DimensionError(
            f"expected a {dim}x{dim} matrix, got shape {matrix.shape}"
        )
    return np.einsum(
        "iaja->ij", matrix.reshape(system_dim, bath_dim, system_dim, bath_dim)
    )


def trace_norm(A):
    """Sum of singular values."""
    return float(np.sum(np.linalg.svd(np.asarray(A), compute_uv=False)))


def trace_distance(rho1, rho2):
    """Half the trace norm of the difference of two states."""
    m1 = rho1.matrix if isinstance(rho1, DensityMatrix) else np.asarray(rho1)
    m2 = rho2.matrix if isinstance(rho2, DensityMatrix) else np.asarray(rho2)
    if m1.shape != m2.shape:
        raise DimensionError(
            f"state dimensions differ: {m1.shape} vs {m2.shape}"
        )
    return 0.5 * trace_norm(m1 - m2)


def segment_propagator(H, dt):
    """exp(-i H dt) through the Hermitian eigendecomposition of H."""
    if dt == 0.0 or not np.any(H):
        return np.eye(H.shape[0], dtype=complex)
    w, V = np.linalg.eigh(H)
    return (V * np.exp(-1j * w * dt)) @ V.conj().T


def _piecewise_propagator(matrix_at, breakpoints, t0, t1):
    """Ordered product of segment propagators for t in [t0, t1]."""
    cuts = [t0] + [b for b in breakpoints if t0 < b < t1] + [t1]
    dim = matrix_at(t0).shape[0]
    U = np.eye(dim, dtype=complex)
    for a, b in zip(cuts, cuts[1:]):
        U = segment_propagator(matrix_at((a + b) / 2.0), b - a) @ U
    return U


def propagate(hspec, t0, t1, rho):
    """Free evolution of a joint state from t0 to t1 under hspec."""
    if t1 < t0:
        raise DomainError(f"t1 = {t1} is earlier than t0 = {t0}")
    bath_dim = hspec.bath_dim
    state = as_density_matrix(rho, 2**hspec.n, bath_dim)
    if t1 == t0:
        return state
    U = _piecewise_propagator(hspec.matrix, hspec.breakpoints(), t0, t1)
    return DensityMatrix(
        U @ state.matrix @ U.conj().T, state.system_dim, state.bath_dim
    )


def codespace_basis(code):
    """Deterministic orthonormal codespace basis, one column per logical state.

    Computational basis vectors are projected onto the codespace in
    lexicographic order and orthonormalized; each kept vector has its first
    nonzero entry made real positive.  The result is the encoding map: logical
    amplitude j multiplies column j.
    """
    proj = codespace_projector(code)
    dim = 2**code.n
    target = 2**code.k
    columns = []
    for i in range(dim):
        v = proj[:, i].copy()
        for u in columns:
            v -= u * (u.conj() @ v)
        norm = float(np.linalg.norm(v))
        if norm < 1e-8:
            continue
        v /= norm
        lead = v[np.flatnonzero(np.abs(v) > 1e-12)[0]]
        v *= np.conj(lead) / abs(lead)
        columns.append(v)
        if len(columns) == target:
            break
    if len(columns) != target:
        raise DomainError(
            f"codespace basis search found {len(columns)} vectors, "
            f"expected {target}"
        )
    return np.column_stack(columns)


def encode_state(code, logical):
    """Map a 2^k logical amplitude vector to a normalized codespace vector."""
    logical = np.asarray(logical, dtype=complex).ravel()
    if logical.size != 2**code.k:
        raise DimensionError(
            f"logical vector has length {logical.size}, expected {2**code.k}"
        )
    norm = float(np.linalg.norm(logical))
    if norm < 1e-12:
        raise DomainError("logical vector is zero")
    return codespace_basis(code) @ (logical / norm)


def initial_joint_state(code, logical, bath_state=None, bath_dim=None):
    """Encoded pure system state tensored with a bath state.

    The bath state defaults to the maximally mixed state on bath_dim.
    """
    if bath_state is None:
        if bath_dim is None:
            raise DomainError("either bath_state or bath_dim is required")
        bath_state = np.eye(bath_dim) / bath_dim
    bath_state = np.asarray(bath_state, dtype=complex)
    if bath_dim is not None and bath_state.shape != (bath_dim, bath_dim):
        raise DimensionError(
            f"bath state has shape {bath_state.shape}, expected "
            f"({bath_dim}, {bath_dim})"
        )
    psi = encode_state(code, logical)
    joint = np.kron(np.outer(psi, psi.conj()), bath_state)
    return as_density_matrix(joint, 2**code.n, bath_state.shape[0])


def codespace_residual(code, state):
    """Weight of a joint state outside codespace (x) bath."""
    joint_proj = np.kron(
        codespace_projector(code), np.eye(state.bath_dim)
    )
    return float(1.0 - np.trace(joint_proj @ state.matrix).real)


@dataclass(frozen=True)
class ProtocolResult:
    """Outcome of one protocol run with per-cycle diagnostics."""

    final_joint: DensityMatrix
    reduced_system: np.ndarray
    ideal_reduced: np.ndarray
    distance: float
    cycle_distances: tuple
    cycle_trace_errors: tuple
    cycle_min_eigenvalues: tuple
    tau: float
    M: int
    epsilon: float
    variant: str
    codespace_residual: float
    pure_encoded: bool


def run_protocol(code, hspec, rho0, tau, M, epsilon, variant="group"):
    """Alternate free evolution and measurement, M cycles over total time tau.

    Each cycle evolves for tau/M under the full Hamiltonian and applies one
    measurement round of the chosen variant.  The returned distance compares
    the reduced system state against the ideal evolution generated by the
    commuting Hamiltonian part alone.  ``pure_encoded`` is False when the
    initial reduced system state is mixed; the analytic bound is only claimed
    for pure encoded states, so callers should treat such comparisons as
    informational.
    """
    if M < 1:
        raise DomainError(f"cycle count must be at least 1, got {M}")
    if tau < 0:
        raise DomainError(f"total time must be nonnegative, got {tau}")
    decomp = decompose_hamiltonian(code, hspec)
    state = as_density_matrix(rho0, 2**code.n, hspec.bath_dim)
    residual = codespace_residual(code, state)
    if residual > SUPPORT_TOLERANCE:
        raise DomainError(
            "initial state is not supported on codespace (x) bath "
            f"(residual {residual:.3e}, tolerance {SUPPORT_TOLERANCE:.1e})"
        )
    reduced0 = partial_trace_bath(
        state.matrix, state.system_dim, state.bath_dim
    )
    purity = float(np.trace(reduced0 @ reduced0).real)
    pure_encoded = purity > 1.0 - 1e-10

    channel = make_channel(code, epsilon, variant)
    dt = tau / M
    time_dependent = hspec.is_time_dependent
    if not time_dependent:
        U_full = segment_propagator(hspec.matrix(0.0), dt)
        U_ideal = segment_propagator(decomp.h_identity_matrix(0.0), dt)
    breakpoints = hspec.breakpoints()

    rho = state.matrix.copy()
    ideal = state.matrix.copy()
    cycle_distances = []
    cycle_trace_errors = []
    cycle_min_eigenvalues = []
    for j in range(M):
        if time_dependent:
            t_a, t_b = j * dt, (j + 1) * dt
            U_full = _piecewise_propagator(
                hspec.matrix, breakpoints, t_a, t_b
            )
            U_ideal = _piecewise_propagator(
                decomp.h_identity_matrix, breakpoints, t_a, t_b
            )
        rho = channel(U_full @ rho @ U_full.conj().T)
        ideal = U_ideal @ ideal @ U_ideal.conj().T
        diff_reduced = partial_trace_bath(
            rho - ideal, state.system_dim, state.bath_dim
        )
        cycle_distances.append(0.5 * trace_norm(diff_reduced))
        cycle_trace_errors.append(abs(float(np.trace(rho).real) - 1.0))
        cycle_min_eigenvalues.append(
            float(np.min(np.linalg.eigvalsh((rho + rho.conj().T) / 2)))
        )

    reduced = partial_trace_bath(rho, state.system_dim, state.bath_dim)
    ideal_reduced = partial_trace_bath(
        ideal, state.system_dim, state.bath_dim
    )
    return ProtocolResult(
        final_joint=DensityMatrix(rho, state.system_dim, state.bath_dim),
        reduced_system=reduced,
        ideal_reduced=ideal_reduced,
        distance=cycle_distances[-1],
        cycle_distances=tuple(cycle_distances),
        cycle_trace_errors=tuple(cycle_trace_errors),
        cycle_min_eigenvalues=tuple(cycle_min_eigenvalues),
        tau=float(tau),
        M=int(M),
        epsilon=float(epsilon),
        variant=variant,
        codespace_residual=residual,
        pure_encoded=pure_encoded,
    )


def ideal_reduced_state(code, hspec, rho0, tau):
    """Reduced system state after evolving under the commuting part alone."""
    decomp = decompose_hamiltonian(code, hspec)
    state = as_density_matrix(rho0, 2**code.n, hspec.bath_dim)
    U = _piecewise_propagator(
        decomp.h_identity_matrix, hspec.breakpoints(), 0.0, float(tau)
    )
    evolved = U @ state.matrix @ U.conj().T
    return partial_trace_bath(evolved, state.system_dim, state.bath_dim)
