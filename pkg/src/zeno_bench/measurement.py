"""Non-selective weak measurement of stabilizer group elements.

A single measurement of S at strength epsilon acts on a density matrix as

    rho -> P(+) rho P(+) + P(-) rho P(-),
    P(+-) = a(+-) (1+S)/2 + a(-+) (1-S)/2,
    a(+-) = sqrt((1 +- tanh(epsilon)) / 2),

which collapses algebraically to

    rho -> (1+zeta)/2 * rho + (1-zeta)/2 * S rho S,   zeta = sech(epsilon).

Channels apply the collapsed form; the explicit operator pair and the
equivalent three-outcome decomposition are kept for cross-checking, never as
the production path.  Everything is parametrized through exp(-epsilon), so
epsilon = inf yields the exact projective limit (zeta = 0, the operator pair
becomes the two eigenspace projectors) with no overflow.  epsilon <= 0 is
rejected: the channel at epsilon = 0 is the identity, and a silent no-op
would mask configuration mistakes.
"""

import math

import numpy as np

from .errors import DegenerateMeasurementError, DomainError, VerificationError
from .stabilizer import apply_isotypical_projector, conjugate_by_element, sigma

DEFAULT_TOLERANCE = 1e-10

VARIANTS = ("group", "generators")


def _check_epsilon(epsilon):
    eps = float(epsilon)
    if math.isnan(eps):
        raise DomainError("measurement strength is NaN")
    if eps <= 0.0:
        raise DegenerateMeasurementError(
            f"measurement strength must be positive, got {eps}"
        )
    return eps


def zeta(epsilon):
    """Coherence retention zeta = sech(epsilon); 0 at the projective limit."""
    eps = _check_epsilon(epsilon)
    u = math.exp(-eps)
    return 2.0 * u / (1.0 + u * u)


def alphas(epsilon):
    """The pair a(+), a(-) with a(+)^2 + a(-)^2 = 1 and 2 a(+) a(-) = zeta."""
    eps = _check_epsilon(epsilon)
    u = math.exp(-eps)
    denom = math.sqrt(1.0 + u * u)
    return 1.0 / denom, u / denom


def measurement_operators(S, epsilon):
    """The two-outcome operator pair (P(+epsilon), P(-epsilon)) for dense S."""
    a_plus, a_minus = alphas(epsilon)
    S = np.asarray(S, dtype=complex)
    eye = np.eye(S.shape[0])
    proj_up = (eye + S) / 2.0
    proj_down = (eye - S) / 2.0
    return a_plus * proj_up + a_minus * proj_down, (
        a_minus * proj_up + a_plus * proj_down
    )


class QuantumChannel:
    """Trace-preserving map as an apply-closure with metadata.

    ``operators`` carries the explicit system-factor operator decomposition
    when one is small enough to be useful (single-element channels); composed
    channels keep it None and are defined by application alone.
    """

    def __init__(self, apply_fn, variant, epsilon, operators=None):
        self._apply = apply_fn
        self.variant = variant
        self.epsilon = epsilon
        self.operators = operators

    def __call__(self, rho):
        return self._apply(rho)

    def __repr__(self):
        return f"QuantumChannel(variant={self.variant!r}, epsilon={self.epsilon})"


def _single_apply(code, label, z):
    def apply_fn(rho):
        rho = np.asarray(rho, dtype=complex)
        sandwiched = conjugate_by_element(code, label, rho)
        return 0.5 * (1.0 + z) * rho + 0.5 * (1.0 - z) * sandwiched

    return apply_fn


def weak_measure_single(code, element, epsilon):
    """Non-selective measurement of one group element at strength epsilon."""
    eps = _check_epsilon(epsilon)
    label = code.label_of(element)
    z = zeta(eps)
    operators = measurement_operators(code.system_matrix(label), eps)
    return QuantumChannel(
        _single_apply(code, label, z), "single", eps, operators
    )


def _composition_apply(code, labels, z):
    def apply_fn(rho):
        out = np.asarray(rho, dtype=complex)
        for label in labels:
            out = 0.5 * (1.0 + z) * out + 0.5 * (
                1.0 - z
            ) * conjugate_by_element(code, label, out)
        return out

    return apply_fn


def weak_measure_group(code, epsilon):
    """One round of measuring every group element (identity included)."""
    eps = _check_epsilon(epsilon)
    labels = tuple(range(code.Q + 1))
    return QuantumChannel(
        _composition_apply(code, labels, zeta(eps)), "group", eps
    )


def weak_measure_generators(code, epsilon):
    """One round of measuring only the generators."""
    eps = _check_epsilon(epsilon)
    labels = tuple(1 << j for j in range(code.Q_bar))
    return QuantumChannel(
        _composition_apply(code, labels, zeta(eps)), "generators", eps
    )


def three_term_povm(code, element, epsilon):
    """Three-outcome refinement of a single-element measurement.

    Outcomes are the two damped syndrome projectors and a no-information
    operator: M1, M2 = (sqrt(1-zeta)/2)(1 +- S), M3 = sqrt(zeta) 1, with
    M1^2 + M2^2 + M3^2 = 1.  As a non-selective channel it is identical to
    :func:`weak_measure_single`.
    """
    eps = _check_epsilon(epsilon)
    label = code.label_of(element)
    z = zeta(eps)
    S = code.system_matrix(label)
    eye = np.eye(S.shape[0])
    root = math.sqrt(1.0 - z) / 2.0
    operators = (root * (eye + S), root * (eye - S), math.sqrt(z) * eye)
    return QuantumChannel(
        _single_apply(code, label, z), "single", eps, operators
    )


def make_channel(code, epsilon, variant):
    """Dispatch on the protocol variant: "group" or "generators"."""
    if variant == "group":
        return weak_measure_group(code, epsilon)
    if variant == "generators":
        return weak_measure_generators(code, epsilon)
    raise DomainError(f"unknown measurement variant {variant!r}")


def effective_exponent(code, variant):
    """Exponent q_eff giving the per-cycle sector retention xi = zeta^q_eff."""
    if variant == "group":
        return code.q
    if variant == "generators":
        return 1
    raise DomainError(f"unknown measurement variant {variant!r}")


def _operator_probe_basis(dim, samples, seed):
    """Complete elementary basis for small dims, else seeded random probes."""
    if dim * dim <= 256:
        basis = []
        for i in range(dim):
            for j in range(dim):
                E = np.zeros((dim, dim), dtype=complex)
                E[i, j] = 1.0
                basis.append(E)
        return basis, "elementary"
    rng = np.random.default_rng(seed)
    basis = [
        rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        for _ in range(samples)
    ]
    return basis, f"random({samples})"


def _random_probe(rng, dim):
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal(
        (dim, dim)
    )


def verify_eigen_action(
    code,
    bath_dim,
    epsilon,
    tol=DEFAULT_TOLERANCE,
    seed=0,
    zeta_perturbation=0.0,
):
    """Check the eigen-action law of single-element measurements.

    Measuring S scales every sector component A_g by zeta^sigma_g(S): left
    alone when S and g share an even number of generators, damped by zeta
    otherwise.  ``zeta_perturbation`` shifts the zeta used in the *expected*
    factor; any nonzero shift must make this check fail, which keeps the
    failure path itself tested.
    """
    eps = _check_epsilon(epsilon)
    dim = 2**code.n * bath_dim
    z = zeta(eps) + zeta_perturbation
    rng = np.random.default_rng(seed)
    max_dev = 0.0
    for label_g in range(code.Q + 1):
        sector_part = apply_isotypical_projector(
            code, label_g, _random_probe(rng, dim)
        )
        scale = float(np.max(np.abs(sector_part)))
        if scale < 1e-12:
            raise VerificationError(
                f"random probe has no component in sector {label_g}"
            )
        for label_s in range(code.Q + 1):
            channel = weak_measure_single(code, label_s, eps)
            expected = z ** sigma(code, label_g, label_s) * sector_part
            dev = (
                float(np.max(np.abs(channel(sector_part) - expected))) / scale
            )
            max_dev = max(max_dev, dev)
    if max_dev > tol:
        raise VerificationError(
            "eigen-action law violated: single-element measurement does not "
            f"scale sector operators by zeta^sigma (deviation {max_dev:.3e}, "
            f"tolerance {tol:.1e}, epsilon {eps}, zeta used {z!r})"
        )
    return {
        "check": "eigen_action",
        "epsilon": eps,
        "zeta": z,
        "max_deviation": max_dev,
        "tolerance": tol,
    }


def verify_group_collapse(
    code,
    bath_dim,
    epsilon,
    tol=DEFAULT_TOLERANCE,
    samples=8,
    seed=0,
):
    """Check the full-group channel equals its two-term normal form.

    The composed channel over all group elements must act as

        (1 - zeta^q) * (projective measurement) + zeta^q * identity

    with q = (Q+1)/2, where the projective part is evaluated through the
    independent operator-space projector onto the trivial sector.
    """
    eps = _check_epsilon(epsilon)
    dim = 2**code.n * bath_dim
    weight = zeta(eps) ** code.q
    channel = weak_measure_group(code, eps)
    basis, basis_kind = _operator_probe_basis(dim, samples, seed)
    max_dev = 0.0
    for probe in basis:
        composed = channel(probe)
        reference = (1.0 - weight) * apply_isotypical_projector(
            code, 0, probe
        ) + weight * probe
        max_dev = max(max_dev, float(np.max(np.abs(composed - reference))))
    if max_dev > tol:
        raise VerificationError(
            f"group channel deviates from its two-term normal form by "
            f"{max_dev:.3e} (tolerance {tol:.1e}, epsilon {eps}, "
            f"basis {basis_kind})"
        )
    return {
        "check": "group_collapse",
        "epsilon": eps,
        "zeta_power_weight": weight,
        "basis": basis_kind,
        "max_deviation": max_dev,
        "tolerance": tol,
    }


def verify_generator_damping(
    code, bath_dim, epsilon, tol=DEFAULT_TOLERANCE, seed=0
):
    """Check the generators-only channel damps each sector by zeta^|g|.

    |g| counts the generators the sector label pairs nontrivially with: a
    random operator is projected into each sector, pushed through the
    channel, and compared against zeta^popcount(label) times itself.
    """
    eps = _check_epsilon(epsilon)
    dim = 2**code.n * bath_dim
    z = zeta(eps)
    channel = weak_measure_generators(code, eps)
    rng = np.random.default_rng(seed)
    max_dev = 0.0
    for label in range(code.Q + 1):
        sector_part = apply_isotypical_projector(
            code, label, _random_probe(rng, dim)
        )
        scale = float(np.max(np.abs(sector_part)))
        if scale < 1e-12:
            raise VerificationError(
                f"random probe has no component in sector {label}"
            )
        expected = z ** bin(label).count("1") * sector_part
        dev = float(np.max(np.abs(channel(sector_part) - expected))) / scale
        max_dev = max(max_dev, dev)
    if max_dev > tol:
        raise VerificationError(
            f"generator channel sector damping deviates by {max_dev:.3e} "
            f"(tolerance {tol:.1e}, epsilon {eps})"
        )
    return {
        "check": "generator_damping",
        "epsilon": eps,
        "zeta": z,
        "max_deviation": max_dev,
        "tolerance": tol,
    }


def verify_operator_forms(code, epsilon, tol=DEFAULT_TOLERANCE, seed=0):
    """Check all three operator forms of one measurement agree.

    For every group element: the two-outcome pair is complete, the
    three-outcome elements are complete, and both reproduce the collapsed
    rho -> (1+zeta)/2 rho + (1-zeta)/2 S rho S form on a random state.
    """
    eps = _check_epsilon(epsilon)
    dim = 2**code.n
    rng = np.random.default_rng(seed)
    probe = _random_probe(rng, dim)
    eye = np.eye(dim)
    max_dev = 0.0
    for label in range(code.Q + 1):
        single = weak_measure_single(code, label, eps)
        p_up, p_down = single.operators
        m1, m2, m3 = three_term_povm(code, label, eps).operators
        max_dev = max(
            max_dev,
            float(np.max(np.abs(p_up @ p_up + p_down @ p_down - eye))),
            float(
                np.max(
                    np.abs(
                        m1.conj().T @ m1
                        + m2.conj().T @ m2
                        + m3.conj().T @ m3
                        - eye
                    )
                )
            ),
        )
        collapsed = single(probe)
        pair_route = p_up @ probe @ p_up + p_down @ probe @ p_down
        povm_route = (
            m1 @ probe @ m1.conj().T
            + m2 @ probe @ m2.conj().T
            + m3 @ probe @ m3.conj().T
        )
        max_dev = max(
            max_dev,
            float(np.max(np.abs(pair_route - collapsed))),
            float(np.max(np.abs(povm_route - collapsed))),
        )
    if max_dev > tol:
        raise VerificationError(
            f"measurement operator forms disagree by {max_dev:.3e} "
            f"(tolerance {tol:.1e}, epsilon {eps})"
        )
    return {
        "check": "operator_forms",
        "epsilon": eps,
        "max_deviation": max_dev,
        "tolerance": tol,
    }
