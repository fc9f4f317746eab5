"""Closed-form distance bounds for the measurement protocols.

Everything here is scalar arithmetic on protocol parameters:

    Q      group size minus one (2^Q_bar - 1)
    q_eff  per-cycle damping exponent: (Q+1)/2 for the group protocol,
           1 for the generators-only protocol
    J0     twice the norm of the commuting Hamiltonian part
    J1     twice the norm of the detectable system-bath part
    xi     per-cycle sector retention zeta^q_eff, zeta = sech(epsilon)

The headline quantity is the distance bound

    B = strong_term + Gamma_g * phi(M)

where strong_term = e^{tau J0} (r^M - 1) with
r = (e^{tau Q J1 / M} + Q e^{-tau J1 / M}) / (Q+1) is the projective-limit
bound, and phi(M) is a combinatorial sum with a closed form through the
roots of a quadratic.  The direct triple sum for phi is kept as the oracle
the closed form is verified against; it is never the production path beyond
its cap.

All exponentials are arranged as expm1/log1p combinations so that the
xi -> 0 limit of B reproduces the projective-limit formula bit for bit and
tiny rates underflow gracefully to B = 0.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    CapacityError,
    DomainError,
    VerificationError,
)
from .measurement import zeta as measurement_zeta

PHI_DIRECT_CAP = 20
B1_MIN_EPSILON = 1e-6

# Grid on which the closed phi solution is certified against the direct sum.
PHI_GRID_Q = (1, 3, 7)
PHI_GRID_BETA = (0.01, 0.1, 0.5)
PHI_GRID_XI = (0.1, 0.5, 0.9)
PHI_GRID_M = tuple(range(1, 16))


def _check_group_size(Q):
    if Q < 1 or (Q + 1) & Q != 0:
        raise DomainError(
            f"group size minus one must be 2^k - 1 for k >= 1, got {Q}"
        )
    return int(Q)


def f_count(Q, l, identity_target):
    """Number of ordered l-tuples of non-identity elements with fixed product.

    Exact integers: f_l = (Q^l + Q(-1)^l)/(Q+1) when the product is the
    identity, (Q^l - (-1)^l)/(Q+1) for any fixed non-identity target.
    """
    Q = _check_group_size(Q)
    if l < 0:
        raise DomainError(f"word length must be nonnegative, got {l}")
    sign = (-1) ** l
    if identity_target:
        numerator = Q**l + Q * sign
    else:
        numerator = Q**l - sign
    quotient, remainder = divmod(numerator, Q + 1)
    if remainder:
        raise DomainError(f"counting formula not integral at Q={Q}, l={l}")
    return quotient


def gamma_l(Q, J0, J1, l, identity_target):
    """Rate-weighted word count, closed form.

    ((J0+QJ1)^l + Q (J0-J1)^l)/(Q+1) for the identity target,
    ((J0+QJ1)^l - (J0-J1)^l)/(Q+1) otherwise.
    """
    Q = _check_group_size(Q)
    if l < 0:
        raise DomainError(f"word length must be nonnegative, got {l}")
    up = (J0 + Q * J1) ** l
    down = (J0 - J1) ** l
    if identity_target:
        return (up + Q * down) / (Q + 1)
    return (up - down) / (Q + 1)


def gamma_l_sum(Q, J0, J1, l, identity_target):
    """Same quantity as :func:`gamma_l` through the explicit binomial sum.

    Sum over s of C(l,s) J0^s J1^(l-s) f_(l-s); kept as the independent
    route for verification.
    """
    Q = _check_group_size(Q)
    if l < 0:
        raise DomainError(f"word length must be nonnegative, got {l}")
    terms = [
        math.comb(l, s)
        * J0**s
        * J1 ** (l - s)
        * f_count(Q, l - s, identity_target)
        for s in range(l + 1)
    ]
    return math.fsum(terms)


@dataclass(frozen=True)
class BoundParameters:
    """Validated scalar inputs of the distance bound."""

    Q: int
    q_effective: int
    J0: float
    J1: float
    tau: float
    M: int
    epsilon: float
    zeta: float
    xi: float

    @property
    def Jm(self):
        return max(self.J0, self.J1)


def bound_parameters(Q, J0, J1, tau, M, epsilon, variant="group"):
    """Build validated BoundParameters for a protocol variant."""
    Q = _check_group_size(Q)
    if variant == "group":
        q_eff = (Q + 1) // 2
    elif variant == "generators":
        q_eff = 1
    else:
        raise DomainError(f"unknown measurement variant {variant!r}")
    J0, J1, tau = float(J0), float(J1), float(tau)
    for name, value in (("J0", J0), ("J1", J1)):
        if not math.isfinite(value) or value < 0:
            raise DomainError(f"{name} must be finite and nonnegative, got {value}")
    if not math.isfinite(tau) or tau < 0:
        raise DomainError(f"tau must be finite and nonnegative, got {tau}")
    if M < 1 or int(M) != M:
        raise DomainError(f"cycle count must be a positive integer, got {M}")
    z = measurement_zeta(epsilon)
    return BoundParameters(
        Q=Q,
        q_effective=q_eff,
        J0=J0,
        J1=J1,
        tau=tau,
        M=int(M),
        epsilon=float(epsilon),
        zeta=z,
        xi=z**q_eff,
    )


def big_gamma(params, identity_target):
    """Per-cycle growth factor Gamma at tau/M.

    Gamma_identity = (expm1(a+b) + Q expm1(a-c))/(Q+1) and
    Gamma_g = (expm1(a+b) - expm1(a-c))/(Q+1), with a = tau J0/M,
    b = tau Q J1/M, c = tau J1/M.
    """
    Q = params.Q
    a = params.tau * params.J0 / params.M
    b = params.tau * Q * params.J1 / params.M
    c = params.tau * params.J1 / params.M
    if identity_target:
        return (math.expm1(a + b) + Q * math.expm1(a - c)) / (Q + 1)
    return (math.expm1(a + b) - math.expm1(a - c)) / (Q + 1)


def phi_direct(Q, beta, xi, M):
    """The combinatorial sum phi(M) evaluated term by term (the oracle).

    Triple sum of beta^(eta-1) xi^u Q^r C(eta,r) C(u-1,r-1) C(M-u,eta-r)
    with compensated summation.  Capped: term counts and binomial sizes are
    only certified small for M <= 20.
    """
    Q = _check_group_size(Q)
    if M < 1:
        raise DomainError(f"cycle count must be at least 1, got {M}")
    if M > PHI_DIRECT_CAP:
        raise CapacityError(
            f"direct sum capped at M <= {PHI_DIRECT_CAP}, got {M}"
        )
    beta = float(beta)
    xi = float(xi)
    terms = []
    for u in range(1, M + 1):
        for eta in range(1, M + 1):
            for r in range(1, min(eta, u) + 1):
                if eta - r > M - u:
                    continue
                terms.append(
                    beta ** (eta - 1)
                    * xi**u
                    * Q**r
                    * math.comb(eta, r)
                    * math.comb(u - 1, r - 1)
                    * math.comb(M - u, eta - r)
                )
    return math.fsum(terms)


def phi_roots(Q, beta, xi):
    """Roots of the characteristic quadratic of the phi recurrence.

    gamma_plus by the quadratic formula, gamma_minus through the Vieta
    product (better conditioned when the roots are far apart).
    """
    s = 1.0 + beta + (1.0 + Q * beta) * xi
    product = (1.0 + beta + Q * beta) * xi
    disc = (1.0 + beta - (1.0 + Q * beta) * xi) ** 2 + 4.0 * Q * beta * beta * xi
    gamma_plus = 0.5 * (s + math.sqrt(disc))
    gamma_minus = product / gamma_plus if gamma_plus > 0 else 0.0
    return gamma_plus, gamma_minus


def _phi_solution(Q, beta, xi, M):
    """Closed phi with intermediates: (phi, g+, g-, A+, A-, degenerate)."""
    gamma_plus, gamma_minus = phi_roots(Q, beta, xi)
    degenerate = (
        beta <= 0.0
        or gamma_plus - gamma_minus <= 1e-12 * gamma_plus
    )
    if degenerate:
        return phi_direct(Q, beta, xi, M), gamma_plus, gamma_minus, None, None, True
    one_plus_beta = 1.0 + beta
    gap = gamma_plus - gamma_minus
    A_plus = (
        Q * beta * xi * (gamma_plus + beta)
        + one_plus_beta * (one_plus_beta - gamma_minus)
    ) / (beta * gap)
    A_minus = (
        Q * beta * xi * (gamma_minus + beta)
        + one_plus_beta * (one_plus_beta - gamma_plus)
    ) / (-beta * gap)
    powered = math.exp(M * math.log1p(beta)) / beta
    phi = (
        A_plus * gamma_plus ** (M - 1)
        + A_minus * gamma_minus ** (M - 1)
        - powered
    )
    return phi, gamma_plus, gamma_minus, A_plus, A_minus, False


def phi_closed(Q, beta, xi, M):
    """Closed-form phi(M); degenerate parameters fall back to the direct sum."""
    _check_group_size(Q)
    if M < 1:
        raise DomainError(f"cycle count must be at least 1, got {M}")
    if beta < 0:
        raise DomainError(f"beta must be nonnegative, got {beta}")
    if not 0.0 <= xi < 1.0:
        raise DomainError(f"xi must lie in [0, 1), got {xi}")
    if xi == 0.0:
        return 0.0
    return _phi_solution(Q, beta, xi, M)[0]


def phi_recurrence_residual(Q, beta, xi, M):
    """Relative residual of the three-term phi recurrence at M >= 2.

    phi(M) = (1+beta+(1+Q beta) xi) phi(M-1) - (1+beta+Q beta) xi phi(M-2)
             + Q beta (1+beta)^(M-2) xi,   with phi(0) = 0.
    """
    if M < 2:
        raise DomainError(f"recurrence defined for M >= 2, got {M}")
    phi_m = phi_closed(Q, beta, xi, M)
    phi_m1 = phi_closed(Q, beta, xi, M - 1)
    phi_m2 = phi_closed(Q, beta, xi, M - 2) if M > 2 else 0.0
    lhs = phi_m
    rhs = (
        (1.0 + beta + (1.0 + Q * beta) * xi) * phi_m1
        - (1.0 + beta + Q * beta) * xi * phi_m2
        + Q * beta * (1.0 + beta) ** (M - 2) * xi
    )
    scale = max(abs(lhs), abs(rhs), 1e-300)
    return abs(lhs - rhs) / scale


def _comb0(n, k):
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def phi_summand(Q, beta, xi, M, u, eta, r):
    """One term of the direct sum, zero outside the binomial support."""
    coeff = _comb0(eta, r) * _comb0(u - 1, r - 1) * _comb0(M - u, eta - r)
    if coeff == 0:
        return 0.0
    return beta ** (eta - 1) * xi**u * Q**r * coeff


def summand_recurrence_residual(Q, beta, xi, M, u, eta, r):
    """Relative residual of the eight-term contiguous summand identity.

    The identity certifies (by telescoping over the summation range) the
    three-term recurrence for phi; it must vanish at every integer point.
    """

    def term(dM, du, deta, dr, weight):
        return weight * phi_summand(
            Q, beta, xi, M + dM, u + du, eta + deta, r + dr
        )

    pieces = [
        term(-2, 0, 0, 0, Q * beta * xi),
        term(-2, 0, 0, 1, beta * xi),
        term(-2, 0, 1, 1, xi),
        term(-1, 0, 0, 0, -Q * beta * xi),
        term(-1, 0, 1, 1, -xi),
        term(-1, 1, 0, 1, -beta),
        term(-1, 1, 1, 1, -1.0),
        term(0, 1, 1, 1, 1.0),
    ]
    scale = max(max(abs(p) for p in pieces), 1e-300)
    return abs(math.fsum(pieces)) / scale


def _stable_one_minus_xi(epsilon, q_eff):
    """(xi, 1 - xi) with the difference computed through expm1/log1p."""
    eps = float(epsilon)
    if math.isinf(eps):
        return 0.0, 1.0
    if eps > 20.0:
        lncosh = eps - math.log(2.0) + math.log1p(math.exp(-2.0 * eps))
    else:
        s = math.sinh(eps / 2.0)
        lncosh = math.log1p(2.0 * s * s)
    xi = math.exp(-q_eff * lncosh)
    return xi, -math.expm1(-q_eff * lncosh)


def b1_coefficient(params):
    """Leading 1/M coefficient of the bound's large-M expansion.

    B1 = e^{tau J0} Q (tau J1)^2 / 2
         + e^{tau Jm} Q tau J1 (1 + tau Jm) xi / (1 - xi).

    Refuses epsilon below 1e-6: the coefficient diverges as the measurement
    strength vanishes and the 1/(1-xi) factor loses all precision there.
    """
    if params.epsilon < B1_MIN_EPSILON:
        raise DomainError(
            f"series coefficient refused for epsilon < {B1_MIN_EPSILON} "
            "(diverges in the vanishing-strength limit)"
        )
    tau, J0, J1, Q = params.tau, params.J0, params.J1, params.Q
    Jm = params.Jm
    xi, one_minus_xi = _stable_one_minus_xi(params.epsilon, params.q_effective)
    strong_piece = math.exp(tau * J0) * Q * (tau * J1) ** 2 / 2.0
    weak_piece = (
        math.exp(tau * Jm)
        * Q
        * tau
        * J1
        * (1.0 + tau * Jm)
        * (xi / one_minus_xi)
    )
    return strong_piece + weak_piece


@dataclass(frozen=True)
class BoundReport:
    """The distance bound with every intermediate quantity."""

    Q: int
    q_effective: int
    J0: float
    J1: float
    Jm: float
    tau: float
    M: int
    epsilon: float
    zeta: float
    xi: float
    Gamma_identity: float
    Gamma_g: float
    beta: float
    Gamma_plus: float
    Gamma_minus: float
    gamma_plus: float  # None when the weak term was not evaluated
    gamma_minus: float
    A_plus: float
    A_minus: float
    phi: float
    degenerate_phi: bool
    weak_term: float
    strong_term: float
    B: float
    B1: float  # None inside the refused epsilon window
    strong_limit: float

    def to_dict(self):
        def jsonable(value):
            if isinstance(value, float) and math.isinf(value):
                return "inf"
            return value

        return {
            name: jsonable(getattr(self, name))
            for name in self.__dataclass_fields__
        }


def theorem1_bound(params):
    """Distance bound for the protocol described by params.

    Evaluates B = strong_term + Gamma_g * phi(M) with the branch on
    J0 >= J1 selecting which Gamma plays the role of beta in phi; reports
    every intermediate.  At xi = 0 the weak term vanishes identically and
    B coincides bit for bit with the projective-limit expression, which is
    also reported separately as strong_limit for every epsilon.
    """
    Q, M, tau = params.Q, params.M, params.tau
    xi = params.xi
    gamma_identity = big_gamma(params, identity_target=True)
    gamma_g = big_gamma(params, identity_target=False)
    if params.J0 >= params.J1:
        beta, g_plus, g_minus = gamma_identity, gamma_identity, gamma_g
    else:
        beta, g_plus, g_minus = gamma_g, gamma_g, gamma_identity

    b = tau * Q * params.J1 / M
    c = tau * params.J1 / M
    r_strong = (math.exp(b) + Q * math.exp(-c)) / (Q + 1)
    strong = math.exp(tau * params.J0) * math.expm1(M * math.log(r_strong))

    gamma_plus = gamma_minus = a_plus = a_minus = phi = None
    degenerate = False
    if xi == 0.0 or gamma_g == 0.0:
        weak = 0.0
        if xi == 0.0:
            phi = 0.0
    else:
        phi, gamma_plus, gamma_minus, a_plus, a_minus, degenerate = (
            _phi_solution(Q, beta, xi, M)
        )
        weak = gamma_g * phi

    return BoundReport(
        Q=Q,
        q_effective=params.q_effective,
        J0=params.J0,
        J1=params.J1,
        Jm=params.Jm,
        tau=tau,
        M=M,
        epsilon=params.epsilon,
        zeta=params.zeta,
        xi=xi,
        Gamma_identity=gamma_identity,
        Gamma_g=gamma_g,
        beta=beta,
        Gamma_plus=g_plus,
        Gamma_minus=g_minus,
        gamma_plus=gamma_plus,
        gamma_minus=gamma_minus,
        A_plus=a_plus,
        A_minus=a_minus,
        phi=phi,
        degenerate_phi=degenerate,
        weak_term=weak,
        strong_term=strong,
        B=strong + weak,
        B1=(
            b1_coefficient(params)
            if params.epsilon >= B1_MIN_EPSILON
            else None
        ),
        strong_limit=strong,
    )


def strong_limit_bound(Q, J0, J1, tau, M):
    """Projective-limit bound, evaluated directly from its own formula."""
    Q = _check_group_size(Q)
    b = tau * Q * J1 / M
    c = tau * J1 / M
    r_strong = (math.exp(b) + Q * math.exp(-c)) / (Q + 1)
    return math.exp(tau * J0) * math.expm1(M * math.log(r_strong))


DEFAULT_TRADEOFF_GRID = (10**2, 10**3, 10**4, 10**5, 10**6)


@dataclass(frozen=True)
class TradeoffReport:
    """Classification and leading-order bound series of a schedule."""

    schedule: str
    parameter: float
    classification: str
    M_grid: tuple
    series: tuple
    details: dict

    @property
    def convergent(self):
        return self.classification == "convergent"


def tradeoff_tau(params, a, M_grid=DEFAULT_TRADEOFF_GRID):
    """Total-time schedule tau = a log(M) / J0 at fixed epsilon.

    Classifies whether the leading-order bound series vanishes as M grows:
    convergent iff a < 1 when J0 >= J1, iff a < J0/J1 when J0 <= J1.  The
    series values follow the leading-order expansion of the bound under the
    schedule, branch-selected the same way.
    """
    if a <= 0:
        raise DomainError(f"schedule coefficient must be positive, got {a}")
    if params.J0 <= 0:
        raise DomainError(
            "the schedule tau = a log(M)/J0 requires a positive J0"
        )
    Q = params.Q
    lam = params.J1 / params.J0
    xi, one_minus_xi = _stable_one_minus_xi(params.epsilon, params.q_effective)
    ratio = xi / one_minus_xi
    if params.J0 >= params.J1:
        convergent = a < 1.0
    else:
        convergent = a < 1.0 / lam
    series = []
    for M in M_grid:
        logM = math.log(M)
        if params.J0 >= params.J1:
            value = (
                Q * lam**2 * a**2 * logM**2 / 4.0
                + (Q / 2.0) * (lam * a * logM + lam * a**2 * logM**2) * ratio
            ) / M ** (1.0 - a)
        else:
            value = lam**2 * a**2 * logM**2 / (4.0 * M ** (1.0 - a)) + (
                (Q / 2.0)
                * (lam * a * logM + lam**2 * a**2 * logM**2)
                * ratio
            ) / M ** (1.0 - lam * a)
        series.append(value)
    return TradeoffReport(
        schedule="tau",
        parameter=float(a),
        classification="convergent" if convergent else "divergent",
        M_grid=tuple(int(M) for M in M_grid),
        series=tuple(series),
        details={"lambda": lam, "xi": xi, "epsilon": params.epsilon},
    )


def tradeoff_eps(params, exponent, M_grid=DEFAULT_TRADEOFF_GRID):
    """Strength schedule epsilon = M^p at fixed tau.

    Evaluates the leading bound term B1/M with zeta = sech(M^p) over the
    grid; the series vanishes as M grows exactly when p > -1/2.
    """
    p = float(exponent)
    series = []
    for M in M_grid:
        eps_m = float(M) ** p
        scheduled = bound_parameters(
            params.Q,
            params.J0,
            params.J1,
            params.tau,
            int(M),
            eps_m,
            variant="group" if params.q_effective > 1 else "generators",
        )
        series.append(b1_coefficient(scheduled) / M)
    return TradeoffReport(
        schedule="epsilon",
        parameter=p,
        classification="convergent" if p > -0.5 else "divergent",
        M_grid=tuple(int(M) for M in M_grid),
        series=tuple(series),
        details={"tau": params.tau},
    )


@dataclass(frozen=True)
class FixedIntervalReport:
    """Bound under a fixed between-measurement interval."""

    Q: int
    J0: float
    J1: float
    delta_tau: float
    M: int
    value: float
    minimizer: int
    minimum_value: float
    small_delta_expansion: float
    protected: bool


def fixed_interval_bound(Q, J0, J1, delta_tau, M):
    """Bound at total time M * delta_tau with the interval held fixed.

    f(M) = e^{J0 delta_tau M} (((e^{Q J1 delta_tau} + Q e^{-J1 delta_tau})
    / (Q+1))^M - 1).  f is increasing in M, so the integer minimizer is
    M = 1; the small-interval expansion of f(1), correct through cubic
    order in the interval,

        (Q/2) u^2 (1 + delta) + Q (Q-1) u^3 / 6,   u = J1 delta_tau,
                                                   delta = J0 delta_tau,

    and the first-order protection criterion u < 1 are reported alongside.
    """
    Q = _check_group_size(Q)
    if delta_tau <= 0:
        raise DomainError(f"interval must be positive, got {delta_tau}")
    if M < 1:
        raise DomainError(f"cycle count must be at least 1, got {M}")
    u = J1 * delta_tau
    delta = J0 * delta_tau

    def f(m):
        r = (math.exp(Q * u) + Q * math.exp(-u)) / (Q + 1)
        return math.exp(delta * m) * math.expm1(m * math.log(r))

    return FixedIntervalReport(
        Q=Q,
        J0=float(J0),
        J1=float(J1),
        delta_tau=float(delta_tau),
        M=int(M),
        value=f(M),
        minimizer=1,
        minimum_value=f(1),
        small_delta_expansion=(Q / 2.0) * u**2 * (1.0 + delta)
        + Q * (Q - 1) * u**3 / 6.0,
        protected=u < 1.0,
    )


def bath_moment_bound(n, norm_B0, norm_Balpha, norm_Bbeta):
    """Spectral-moment bound (2 ||B0||)^n ||B_alpha|| ||B_beta||."""
    if n < 0 or int(n) != n:
        raise DomainError(f"moment order must be a nonnegative integer, got {n}")
    for name, value in (
        ("norm_B0", norm_B0),
        ("norm_Balpha", norm_Balpha),
        ("norm_Bbeta", norm_Bbeta),
    ):
        if not math.isfinite(value) or value < 0:
            raise DomainError(
                f"{name} must be finite and nonnegative, got {value}"
            )
    return (2.0 * norm_B0) ** int(n) * norm_Balpha * norm_Bbeta


def lorentzian_moments_diverge(n):
    """A Lorentzian spectral density has divergent moments for n >= 1."""
    if n < 0 or int(n) != n:
        raise DomainError(f"moment order must be a nonnegative integer, got {n}")
    return n >= 1


def verify_phi_grid(tol=1e-9):
    """Certify the closed phi solution against the direct sum on the grid.

    Checks relative agreement and the three-term recurrence residual at
    every (Q, beta, xi, M) grid point; raises on the first breach.
    """
    worst_match = 0.0
    worst_residual = 0.0
    points = 0
    for Q in PHI_GRID_Q:
        for beta in PHI_GRID_BETA:
            for xi in PHI_GRID_XI:
                for M in PHI_GRID_M:
                    points += 1
                    direct = phi_direct(Q, beta, xi, M)
                    closed = phi_closed(Q, beta, xi, M)
                    rel = abs(closed - direct) / max(abs(direct), 1e-300)
                    worst_match = max(worst_match, rel)
                    if rel > tol:
                        raise VerificationError(
                            f"closed phi deviates from the direct sum by "
                            f"{rel:.3e} at Q={Q}, beta={beta}, xi={xi}, M={M}"
                        )
                    if M >= 2:
                        res = phi_recurrence_residual(Q, beta, xi, M)
                        worst_residual = max(worst_residual, res)
                        if res > tol:
                            raise VerificationError(
                                f"phi recurrence residual {res:.3e} at "
                                f"Q={Q}, beta={beta}, xi={xi}, M={M}"
                            )
    return {
        "check": "phi_grid",
        "points": points,
        "max_relative_mismatch": worst_match,
        "max_recurrence_residual": worst_residual,
        "tolerance": tol,
    }


def verify_summand_recurrence(seed=0, samples=200, tol=1e-10):
    """Check the eight-term summand identity at random interior points."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    found = 0
    attempts = 0
    while found < samples and attempts < 100 * samples:
        attempts += 1
        Q = int(rng.choice(PHI_GRID_Q))
        beta = float(rng.uniform(0.01, 0.8))
        xi = float(rng.uniform(0.05, 0.95))
        M = int(rng.integers(4, 13))
        u = int(rng.integers(1, M - 1))
        eta = int(rng.integers(1, 7))
        r = int(rng.integers(1, min(eta, u) + 1))
        shifts = [
            (-2, 0, 0, 0),
            (-2, 0, 0, 1),
            (-2, 0, 1, 1),
            (-1, 0, 0, 0),
            (-1, 0, 1, 1),
            (-1, 1, 0, 1),
            (-1, 1, 1, 1),
            (0, 1, 1, 1),
        ]
        if any(
            phi_summand(Q, beta, xi, M + dM, u + du, eta + de, r + dr) == 0.0
            for dM, du, de, dr in shifts
        ):
            continue
        found += 1
        res = summand_recurrence_residual(Q, beta, xi, M, u, eta, r)
        worst = max(worst, res)
        if res > tol:
            raise VerificationError(
                f"summand identity residual {res:.3e} at Q={Q}, "
                f"beta={beta:.4f}, xi={xi:.4f}, "
                f"(M,u,eta,r)=({M},{u},{eta},{r})"
            )
    if found < samples:
        raise VerificationError(
            f"only {found} of {samples} interior sample points found"
        )
    return {
        "check": "summand_recurrence",
        "samples": found,
        "max_residual": worst,
        "tolerance": tol,
    }
