"""Deterministic property suites behind the ``verify`` subcommand.

Each check either returns a details dictionary or raises VerificationError
with the witness values in the message.  Suites are deterministic given the
seed: every randomized check derives its own generator from (seed, slot), so
check order never shifts the streams.
"""

import math

import numpy as np

from . import pauli_algebra as pa
from .bounds import (
    b1_coefficient,
    bound_parameters,
    f_count,
    gamma_l,
    gamma_l_sum,
    phi_roots,
    theorem1_bound,
    verify_phi_grid,
    verify_summand_recurrence,
)
from .errors import AssumptionViolationError, VerificationError
from .measurement import (
    verify_eigen_action,
    verify_generator_damping,
    verify_group_collapse,
    verify_operator_forms,
    weak_measure_single,
    zeta,
)
from .stabilizer import (
    HamiltonianSpec,
    apply_isotypical_projector,
    build_code,
    decompose_hamiltonian,
    sigma,
    verify_isotypical_dimensions,
)

SUITES = ("pauli", "stabilizer", "measurement", "bounds")

_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
_SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


def _rng(seed, slot):
    return np.random.default_rng([seed, slot])


def _random_pauli(rng, n):
    x = tuple(int(b) for b in rng.integers(0, 2, n))
    z = tuple(int(b) for b in rng.integers(0, 2, n))
    return pa.PauliOperator(n, x, z, int(rng.integers(0, 4)))


def _random_matrix(rng, dim):
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal(
        (dim, dim)
    )


def _bitflip_code():
    return build_code(
        [pa.pauli_from_string("ZZI"), pa.pauli_from_string("IZZ")]
    )


def _two_qubit_code():
    # Signed-element coverage: the product of XX and ZZ carries sign -1.
    return build_code([pa.pauli_from_string("XX"), pa.pauli_from_string("ZZ")])


def _bitflip_hamiltonian():
    return HamiltonianSpec(
        3,
        2,
        [
            (pa.pauli_from_string("XII"), 0.1 * _SIGMA_X),
            (pa.pauli_from_string("III"), 0.05 * _SIGMA_Z),
        ],
    )


# ---------------------------------------------------------------- pauli suite


def _check_pauli_squares(seed):
    rng = _rng(seed, 1)
    for _ in range(200):
        n = int(rng.integers(1, 5))
        p = _random_pauli(rng, n)
        square = pa.multiply(p, p)
        if any(square.x_bits) or any(square.z_bits):
            raise VerificationError(f"{p} squared is not an identity string")
        if square.phase_power % 2:
            raise VerificationError(
                f"{p} squared has phase {square.phase}, expected +-1"
            )
    return {"samples": 200}


def _check_pauli_associativity(seed, tol=1e-12):
    rng = _rng(seed, 2)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 4))
        p, q, r = (_random_pauli(rng, n) for _ in range(3))
        left = pa.to_matrix(pa.multiply(pa.multiply(p, q), r))
        right = pa.to_matrix(pa.multiply(p, pa.multiply(q, r)))
        worst = max(worst, float(np.max(np.abs(left - right))))
    if worst > tol:
        raise VerificationError(f"associativity deviation {worst:.3e}")
    return {"samples": 100, "max_deviation": worst}


def _check_pauli_matrix_homomorphism(seed, tol=1e-12):
    rng = _rng(seed, 3)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 4))
        p, q = _random_pauli(rng, n), _random_pauli(rng, n)
        direct = pa.to_matrix(p) @ pa.to_matrix(q)
        through = pa.to_matrix(pa.multiply(p, q))
        worst = max(worst, float(np.max(np.abs(direct - through))))
    if worst > tol:
        raise VerificationError(
            f"matrix product disagrees with symbolic product by {worst:.3e}"
        )
    return {"samples": 100, "max_deviation": worst}


def _check_pauli_commutes(seed, tol=1e-12):
    rng = _rng(seed, 4)
    for _ in range(200):
        n = int(rng.integers(1, 5))
        p, q = _random_pauli(rng, n), _random_pauli(rng, n)
        P, Q = pa.to_matrix(p), pa.to_matrix(q)
        matrix_commutes = float(np.max(np.abs(P @ Q - Q @ P))) < tol
        if pa.commutes(p, q) != matrix_commutes:
            raise VerificationError(
                f"commutes({p}, {q}) = {pa.commutes(p, q)} but the matrix "
                f"test says {matrix_commutes}"
            )
    return {"samples": 200}


def _check_pauli_hermitian_structure(seed):
    rng = _rng(seed, 5)
    for _ in range(200):
        n = int(rng.integers(1, 4))
        p = _random_pauli(rng, n)
        matrix = pa.to_matrix(p)
        is_selfadjoint = np.array_equal(matrix, matrix.conj().T)
        if p.is_hermitian != is_selfadjoint:
            raise VerificationError(
                f"{p}: hermitian flag {p.is_hermitian} but matrix "
                f"self-adjointness is {is_selfadjoint}"
            )
    return {"samples": 200}


# ----------------------------------------------------------- stabilizer suite


def _check_projector_completeness(seed, tol=1e-10):
    worst = 0.0
    for slot, (code, bath_dim) in enumerate(
        [(_bitflip_code(), 2), (_two_qubit_code(), 2)]
    ):
        rng = _rng(seed, 10 + slot)
        dim = 2**code.n * bath_dim
        probe = _random_matrix(rng, dim)
        total = sum(
            apply_isotypical_projector(code, g, probe)
            for g in range(code.Q + 1)
        )
        worst = max(worst, float(np.max(np.abs(total - probe))))
    if worst > tol:
        raise VerificationError(
            f"sector projectors do not sum to the identity map ({worst:.3e})"
        )
    return {"max_deviation": worst}


def _check_projector_orthogonality(seed, tol=1e-10):
    code = _bitflip_code()
    rng = _rng(seed, 12)
    probe = _random_matrix(rng, 16)
    worst = 0.0
    parts = {
        g: apply_isotypical_projector(code, g, probe)
        for g in range(code.Q + 1)
    }
    for g in range(code.Q + 1):
        again = apply_isotypical_projector(code, g, parts[g])
        worst = max(worst, float(np.max(np.abs(again - parts[g]))))
        for h in range(code.Q + 1):
            if h == g:
                continue
            cross = apply_isotypical_projector(code, h, parts[g])
            worst = max(worst, float(np.max(np.abs(cross))))
            overlap = abs(np.trace(parts[g].conj().T @ parts[h]))
            scale = max(
                float(np.linalg.norm(parts[g])) * float(np.linalg.norm(parts[h])),
                1e-300,
            )
            worst = max(worst, overlap / scale)
    if worst > tol:
        raise VerificationError(
            f"sector projectors are not orthogonal idempotents ({worst:.3e})"
        )
    return {"max_deviation": worst}


def _check_graded_products(seed, tol=1e-10):
    code = _bitflip_code()
    rng = _rng(seed, 13)
    worst = 0.0
    for _ in range(20):
        g = int(rng.integers(0, code.Q + 1))
        h = int(rng.integers(0, code.Q + 1))
        A = apply_isotypical_projector(code, g, _random_matrix(rng, 16))
        B = apply_isotypical_projector(code, h, _random_matrix(rng, 16))
        product = A @ B
        bracket = 1j * (A @ B - B @ A)
        for candidate in (product, bracket):
            scale = max(float(np.max(np.abs(candidate))), 1e-12)
            kept = apply_isotypical_projector(code, g ^ h, candidate)
            worst = max(
                worst, float(np.max(np.abs(kept - candidate))) / scale
            )
    if worst > tol:
        raise VerificationError(
            f"products/brackets of sector operators leave the expected "
            f"sector (residual {worst:.3e})"
        )
    return {"samples": 20, "max_residual": worst}


def _check_sigma_symmetry(seed):
    for code in (_bitflip_code(), _two_qubit_code()):
        for g in range(code.Q + 1):
            if sigma(code, 0, g) != 0:
                raise VerificationError(
                    f"sigma of the identity label against {g} is nonzero"
                )
            for h in range(code.Q + 1):
                if sigma(code, g, h) != sigma(code, h, g):
                    raise VerificationError(
                        f"sigma asymmetric at labels {g}, {h}"
                    )
    return {"codes": 2}


def _check_isotypical_dimensions(seed):
    records = {}
    for name, code, bath_dim in (
        ("bitflip", _bitflip_code(), 2),
        ("two_qubit", _two_qubit_code(), 2),
    ):
        decomp = verify_isotypical_dimensions(code, bath_dim)
        records[name] = {
            "state_dims": sorted(set(decomp.state_dims.values())),
            "operator_dims": sorted(set(decomp.operator_dims.values())),
        }
    return records


def _check_hamiltonian_split(seed, tol=1e-12):
    code = _bitflip_code()
    hspec = _bitflip_hamiltonian()
    decomp = decompose_hamiltonian(code, hspec)
    if abs(decomp.J0 - 0.1) > tol or abs(decomp.J1 - 0.2) > tol:
        raise VerificationError(
            f"rates J0={decomp.J0}, J1={decomp.J1}, expected 0.1 and 0.2"
        )
    if decomp.term_labels != (1, 0):
        raise VerificationError(
            f"term sector labels {decomp.term_labels}, expected (1, 0)"
        )
    residual = float(
        np.max(
            np.abs(
                decomp.h_identity_matrix() + decomp.h_sb_matrix()
                - hspec.matrix()
            )
        )
    )
    if residual > tol:
        raise VerificationError(
            f"sector components do not reconstruct H (residual {residual:.3e})"
        )
    return {"J0": decomp.J0, "J1": decomp.J1, "reconstruction": residual}


def _check_undetectable_rejection(seed):
    code = _bitflip_code()
    hspec = HamiltonianSpec(
        3, 2, [(pa.pauli_from_string("XXX"), 0.1 * _SIGMA_X)]
    )
    try:
        decompose_hamiltonian(code, hspec)
    except AssumptionViolationError as exc:
        return {"rejected": True, "message": str(exc)}
    raise VerificationError(
        "a system-bath coupling commuting with the whole group was accepted"
    )


# ---------------------------------------------------------- measurement suite


def _measurement_epsilons():
    return (0.5, 1.0, math.inf)


def _check_order_independence(seed, tol=1e-12):
    code = _bitflip_code()
    rng = _rng(seed, 20)
    probe = _random_matrix(rng, 16)
    eps = 0.8
    forward = probe
    backward = probe
    for label in range(code.Q + 1):
        forward = weak_measure_single(code, label, eps)(forward)
    for label in reversed(range(code.Q + 1)):
        backward = weak_measure_single(code, label, eps)(backward)
    deviation = float(np.max(np.abs(forward - backward)))
    if deviation > tol:
        raise VerificationError(
            f"group measurement depends on element order ({deviation:.3e})"
        )
    return {"max_deviation": deviation}


def _check_monotone_damping():
    code = _bitflip_code()
    grid = [0.25, 0.5, 1.0, 2.0, 4.0]
    factors = [zeta(e) ** code.q for e in grid]
    if not all(a > b for a, b in zip(factors, factors[1:])):
        raise VerificationError(
            f"sector damping is not strictly decreasing in epsilon: {factors}"
        )
    return {"epsilons": grid, "factors": factors}


# --------------------------------------------------------------- bounds suite


def _check_vieta(tol=1e-12):
    worst = 0.0
    for Q in (1, 3, 7):
        for beta in (0.01, 0.1, 0.5):
            for xi in (0.1, 0.5, 0.9):
                g_plus, g_minus = phi_roots(Q, beta, xi)
                sum_dev = abs(
                    (g_plus + g_minus) - (1 + beta + (1 + Q * beta) * xi)
                )
                prod_dev = abs(g_plus * g_minus - (1 + beta + Q * beta) * xi)
                worst = max(worst, sum_dev, prod_dev)
                if g_plus <= g_minus or g_minus <= 0:
                    raise VerificationError(
                        f"root ordering violated at Q={Q}, beta={beta}, "
                        f"xi={xi}: {g_plus}, {g_minus}"
                    )
    if worst > tol:
        raise VerificationError(f"root sum/product residual {worst:.3e}")
    return {"max_residual": worst}


def _check_gamma_l_routes(tol=1e-12):
    worst = 0.0
    for Q in (1, 3, 7, 15):
        for J0, J1 in ((1.0, 2.0), (2.0, 1.0), (0.3, 0.0), (0.0, 0.7)):
            for l in range(7):
                for target in (True, False):
                    closed = gamma_l(Q, J0, J1, l, target)
                    summed = gamma_l_sum(Q, J0, J1, l, target)
                    scale = max(abs(closed), abs(summed), 1.0)
                    worst = max(worst, abs(closed - summed) / scale)
    if worst > tol:
        raise VerificationError(
            f"closed and binomial-sum rate counts disagree ({worst:.3e})"
        )
    return {"max_relative_deviation": worst}


def _brute_force_word_counts(code, length):
    """Count ordered words of non-identity elements by product, explicitly.

    Multiplies actual Pauli operators rather than composing labels, so the
    counts are independent of the group law the label arithmetic assumes.
    Returns a dict keyed by (x_bits, z_bits, phase_power).
    """
    def key(p):
        return (p.x_bits, p.z_bits, p.phase_power)

    non_identity = [code.element(g) for g in range(1, code.Q + 1)]
    counts = {key(pa.identity(code.n)): 1}
    ops = {key(pa.identity(code.n)): pa.identity(code.n)}
    for _ in range(length):
        nxt = {}
        nxt_ops = {}
        for k, ways in counts.items():
            for e in non_identity:
                product = pa.multiply(ops[k], e)
                pk = key(product)
                nxt[pk] = nxt.get(pk, 0) + ways
                nxt_ops[pk] = product
        counts, ops = nxt, nxt_ops
    return counts


def _check_f_count_enumeration():
    code = _bitflip_code()
    for l in range(6):
        expected_identity = f_count(code.Q, l, True)
        expected_other = f_count(code.Q, l, False)
        counts = _brute_force_word_counts(code, l)
        for target in range(code.Q + 1):
            element = code.element(target)
            brute = counts.get(
                (element.x_bits, element.z_bits, element.phase_power), 0
            )
            expected = expected_identity if target == 0 else expected_other
            if brute != expected:
                raise VerificationError(
                    f"word count mismatch at l={l}, target={target}: "
                    f"enumerated {brute}, closed form {expected}"
                )
    return {"Q": code.Q, "lengths": list(range(6))}


def _check_b1_asymptote(rtol=0.05):
    params = bound_parameters(3, 0.2, 0.2, 1.0, 10**5, 1.0, "group")
    report = theorem1_bound(params)
    b1 = b1_coefficient(params)
    rel = abs(params.M * report.B - b1) / b1
    if rel > rtol:
        raise VerificationError(
            f"M*B at M={params.M} deviates from the series coefficient "
            f"by {rel:.3%} (limit {rtol:.0%})"
        )
    return {"M": params.M, "M_times_B": params.M * report.B, "B1": b1, "rel": rel}


def _check_strong_limit_exact():
    for Q in (1, 3):
        for (J0, J1) in ((0.1, 0.2), (0.2, 0.1)):
            for M in (1, 4, 16):
                params = bound_parameters(Q, J0, J1, 1.0, M, math.inf, "group")
                report = theorem1_bound(params)
                if report.B != report.strong_limit:
                    raise VerificationError(
                        f"projective-limit bound not exact at Q={Q}, "
                        f"J0={J0}, J1={J1}, M={M}: "
                        f"{report.B} != {report.strong_limit}"
                    )
    return {"points": 18}


def _check_variant_ordering():
    worst_margin = math.inf
    for Q in (3, 7):
        for eps in (0.5, 1.0, 2.0):
            for M in (1, 4, 16):
                group = theorem1_bound(
                    bound_parameters(Q, 0.1, 0.2, 1.0, M, eps, "group")
                )
                gens = theorem1_bound(
                    bound_parameters(Q, 0.1, 0.2, 1.0, M, eps, "generators")
                )
                margin = gens.B - group.B
                worst_margin = min(worst_margin, margin)
                if margin < -1e-12:
                    raise VerificationError(
                        f"generators-variant bound below group bound at "
                        f"Q={Q}, eps={eps}, M={M}: {gens.B} < {group.B}"
                    )
    return {"min_margin": worst_margin}


def _check_eps_monotonicity():
    grid = [0.25, 0.5, 1.0, 2.0, 4.0, math.inf]
    for Q in (3,):
        for M in (1, 4, 16):
            values = [
                theorem1_bound(
                    bound_parameters(Q, 0.1, 0.2, 1.0, M, eps, "group")
                ).B
                for eps in grid
            ]
            for a, b in zip(values, values[1:]):
                if b > a + 1e-12:
                    raise VerificationError(
                        f"bound increases with epsilon at Q={Q}, M={M}: "
                        f"{values}"
                    )
    return {"epsilons": [e if not math.isinf(e) else "inf" for e in grid]}


def _check_j1_zero_exact():
    for M in (1, 7, 100):
        for eps in (0.5, math.inf):
            report = theorem1_bound(
                bound_parameters(3, 0.4, 0.0, 2.0, M, eps, "group")
            )
            if report.B != 0.0:
                raise VerificationError(
                    f"bound nonzero without system-bath coupling: {report.B}"
                )
    return {"points": 6}


# ------------------------------------------------------------- suite assembly


def _pauli_checks(seed, zeta_perturbation):
    return [
        ("squares_to_identity", lambda: _check_pauli_squares(seed)),
        ("associativity", lambda: _check_pauli_associativity(seed)),
        ("matrix_homomorphism", lambda: _check_pauli_matrix_homomorphism(seed)),
        ("commutation_predicate", lambda: _check_pauli_commutes(seed)),
        ("hermitian_structure", lambda: _check_pauli_hermitian_structure(seed)),
    ]


def _stabilizer_checks(seed, zeta_perturbation):
    return [
        ("projector_completeness", lambda: _check_projector_completeness(seed)),
        ("projector_orthogonality", lambda: _check_projector_orthogonality(seed)),
        ("graded_products", lambda: _check_graded_products(seed)),
        ("sigma_symmetry", lambda: _check_sigma_symmetry(seed)),
        ("isotypical_dimensions", lambda: _check_isotypical_dimensions(seed)),
        ("hamiltonian_split", lambda: _check_hamiltonian_split(seed)),
        ("undetectable_rejection", lambda: _check_undetectable_rejection(seed)),
    ]


def _measurement_checks(seed, zeta_perturbation):
    code = _bitflip_code()
    checks = []
    for i, eps in enumerate(_measurement_epsilons()):
        tag = "inf" if math.isinf(eps) else eps
        checks.append(
            (
                f"operator_forms(eps={tag})",
                lambda e=eps, i=i: verify_operator_forms(code, e, seed=seed + i),
            )
        )
        checks.append(
            (
                f"eigen_action(eps={tag})",
                lambda e=eps, i=i: verify_eigen_action(
                    code,
                    2,
                    e,
                    seed=seed + i,
                    zeta_perturbation=zeta_perturbation,
                ),
            )
        )
        checks.append(
            (
                f"group_collapse(eps={tag})",
                lambda e=eps, i=i: verify_group_collapse(
                    code, 2, e, seed=seed + i
                ),
            )
        )
        checks.append(
            (
                f"generator_damping(eps={tag})",
                lambda e=eps, i=i: verify_generator_damping(
                    code, 2, e, seed=seed + i
                ),
            )
        )
    checks.append(
        ("order_independence", lambda: _check_order_independence(seed))
    )
    checks.append(("monotone_damping", _check_monotone_damping))
    return checks


def _bounds_checks(seed, zeta_perturbation):
    return [
        ("phi_grid", verify_phi_grid),
        ("summand_recurrence", lambda: verify_summand_recurrence(seed=seed)),
        ("root_sum_product", _check_vieta),
        ("rate_count_routes", _check_gamma_l_routes),
        ("word_count_enumeration", _check_f_count_enumeration),
        ("series_coefficient_asymptote", _check_b1_asymptote),
        ("projective_limit_exact", _check_strong_limit_exact),
        ("variant_ordering", _check_variant_ordering),
        ("epsilon_monotonicity", _check_eps_monotonicity),
        ("decoupled_bound_zero", _check_j1_zero_exact),
    ]


_SUITE_BUILDERS = {
    "pauli": _pauli_checks,
    "stabilizer": _stabilizer_checks,
    "measurement": _measurement_checks,
    "bounds": _bounds_checks,
}


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return value
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return _jsonable(float(value))
    return value


def run_suite(suite, seed=0, zeta_perturbation=0.0):
    """Run one named suite (or "all"); returns a deterministic report dict."""
    if suite == "all":
        names = list(SUITES)
    elif suite in _SUITE_BUILDERS:
        names = [suite]
    else:
        raise VerificationError(
            f"unknown suite {suite!r}; choose from {SUITES + ('all',)}"
        )
    checks = []
    for name in names:
        for check_name, fn in _SUITE_BUILDERS[name](seed, zeta_perturbation):
            entry = {"suite": name, "check": check_name}
            try:
                entry["details"] = _jsonable(fn())
                entry["passed"] = True
            except VerificationError as exc:
                entry["passed"] = False
                entry["error"] = str(exc)
            checks.append(entry)
    failures = [c["check"] for c in checks if not c["passed"]]
    return {
        "suite": suite,
        "seed": seed,
        "zeta_perturbation": zeta_perturbation,
        "passed": not failures,
        "failures": failures,
        "checks": checks,
    }
