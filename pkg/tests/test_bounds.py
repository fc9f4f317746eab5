"""Closed-form bound machinery against direct sums and hand oracles."""

import math

import numpy as np
import pytest

import zeno_bench as zb
from zeno_bench.bounds import (
    PHI_GRID_BETA,
    PHI_GRID_M,
    PHI_GRID_Q,
    PHI_GRID_XI,
    big_gamma,
    gamma_l_sum,
    phi_recurrence_residual,
    phi_roots,
    phi_summand,
    summand_recurrence_residual,
    verify_phi_grid,
    verify_summand_recurrence,
)


# ------------------------------------------------------------------ counting


def test_f_count_hand_values():
    for Q in (3, 15):
        assert zb.f_count(Q, 0, True) == 1
        assert zb.f_count(Q, 0, False) == 0
        assert zb.f_count(Q, 1, True) == 0
        assert zb.f_count(Q, 1, False) == 1
        assert zb.f_count(Q, 2, True) == Q
        assert zb.f_count(Q, 2, False) == Q - 1
        assert zb.f_count(Q, 3, True) == Q * (Q - 1)
        assert zb.f_count(Q, 3, False) == Q * Q - Q + 1


def test_f_count_is_exact_integer():
    value = zb.f_count(15, 12, False)
    assert isinstance(value, int)
    assert value == (15**12 - 1) // 16


def test_f_count_total_words():
    """Summing over all group elements recovers Q^l ordered words."""
    for Q in (3, 7, 15):
        for l in range(8):
            total = zb.f_count(Q, l, True) + Q * zb.f_count(Q, l, False)
            assert total == Q**l


def test_f_count_rejects_bad_group_size():
    with pytest.raises(zb.DomainError):
        zb.f_count(4, 2, True)
    with pytest.raises(zb.DomainError):
        zb.f_count(0, 2, True)


def test_gamma_l_closed_vs_binomial_sum():
    for Q in (1, 3, 7, 15):
        for J0, J1 in ((0.5, 1.5), (1.5, 0.5), (0.0, 1.0), (1.0, 0.0)):
            for l in range(8):
                for target in (True, False):
                    closed = zb.gamma_l(Q, J0, J1, l, target)
                    summed = gamma_l_sum(Q, J0, J1, l, target)
                    assert closed == pytest.approx(
                        summed, rel=1e-12, abs=1e-300
                    )


def test_big_gamma_matches_naive_formula():
    params = zb.bound_parameters(3, 0.4, 0.7, 2.0, 5, 1.0, "group")
    a = params.tau * params.J0 / params.M
    b = params.tau * params.Q * params.J1 / params.M
    c = params.tau * params.J1 / params.M
    Q = params.Q
    naive_identity = (math.exp(a + b) + Q * math.exp(a - c)) / (Q + 1) - 1.0
    naive_g = (math.exp(a + b) - math.exp(a - c)) / (Q + 1)
    assert big_gamma(params, True) == pytest.approx(naive_identity, rel=1e-13)
    assert big_gamma(params, False) == pytest.approx(naive_g, rel=1e-13)


# ----------------------------------------------------------------- phi oracle


def test_phi_small_m_hand_values():
    """M = 1 and M = 2 sums written out term by term.

    M=1 has the single term (u, eta, r) = (1, 1, 1) worth Q xi.  M=2 adds
    (1,2,1), (2,1,1) and (2,2,2), giving
    Q xi + 2 Q beta xi + Q xi^2 + Q^2 beta xi^2.
    """
    for Q in (1, 3):
        for beta in (0.05, 0.4):
            for xi in (0.2, 0.8):
                phi1 = Q * xi
                assert zb.phi_direct(Q, beta, xi, 1) == pytest.approx(
                    phi1, rel=1e-14
                )
                assert zb.phi_closed(Q, beta, xi, 1) == pytest.approx(
                    phi1, rel=1e-11
                )
                phi2 = (
                    Q * xi
                    + 2 * Q * beta * xi
                    + Q * xi**2
                    + Q**2 * beta * xi**2
                )
                assert zb.phi_direct(Q, beta, xi, 2) == pytest.approx(
                    phi2, rel=1e-13
                )
                assert zb.phi_closed(Q, beta, xi, 2) == pytest.approx(
                    phi2, rel=1e-11
                )


def test_phi_closed_matches_direct_on_grid():
    report = verify_phi_grid(tol=1e-9)
    assert report["points"] == len(PHI_GRID_Q) * len(PHI_GRID_BETA) * len(
        PHI_GRID_XI
    ) * len(PHI_GRID_M)
    assert report["max_relative_mismatch"] < 1e-9


def test_phi_recurrence_residual_small():
    for Q in PHI_GRID_Q:
        for beta in PHI_GRID_BETA:
            for xi in PHI_GRID_XI:
                for M in (2, 5, 9, 15):
                    assert phi_recurrence_residual(Q, beta, xi, M) < 1e-9


def test_phi_roots_are_characteristic_roots():
    """gamma+- must solve x^2 - (1+beta+(1+Q beta)xi) x + (1+beta+Q beta)xi."""
    for Q in (1, 7):
        for beta in (0.02, 0.45):
            for xi in (0.15, 0.85):
                s = 1 + beta + (1 + Q * beta) * xi
                p = (1 + beta + Q * beta) * xi
                for root in phi_roots(Q, beta, xi):
                    assert root * root - s * root + p == pytest.approx(
                        0.0, abs=1e-12
                    )


def test_phi_domain_checks():
    with pytest.raises(zb.DomainError):
        zb.phi_closed(3, -0.1, 0.5, 4)
    with pytest.raises(zb.DomainError):
        zb.phi_closed(3, 0.1, 1.5, 4)
    with pytest.raises(zb.DomainError):
        zb.phi_direct(3, 0.1, 0.5, 0)
    with pytest.raises(zb.CapacityError):
        zb.phi_direct(3, 0.1, 0.5, 21)


def test_summand_recurrence_at_interior_points():
    assert summand_recurrence_residual(3, 0.2, 0.5, 8, 4, 3, 2) < 1e-10
    assert summand_recurrence_residual(7, 0.1, 0.3, 10, 6, 4, 3) < 1e-10
    report = verify_summand_recurrence(seed=5)
    assert report["max_residual"] < 1e-10


def test_phi_summand_matches_direct_sum():
    """Summing the standalone summand over its support recovers phi."""
    Q, beta, xi, M = 3, 0.3, 0.6, 7
    total = 0.0
    for u in range(1, M + 1):
        for eta in range(1, M + 1):
            for r in range(1, min(eta, u) + 1):
                if eta - r > M - u:
                    continue
                total += phi_summand(Q, beta, xi, M, u, eta, r)
    assert total == pytest.approx(zb.phi_direct(Q, beta, xi, M), rel=1e-12)


# ------------------------------------------------------------------ the bound


def test_bound_parameters_validation():
    with pytest.raises(zb.DomainError):
        zb.bound_parameters(4, 0.1, 0.2, 1.0, 4, 1.0)
    with pytest.raises(zb.DomainError):
        zb.bound_parameters(3, -0.1, 0.2, 1.0, 4, 1.0)
    with pytest.raises(zb.DomainError):
        zb.bound_parameters(3, 0.1, 0.2, -1.0, 4, 1.0)
    with pytest.raises(zb.DomainError):
        zb.bound_parameters(3, 0.1, 0.2, 1.0, 0, 1.0)
    with pytest.raises(zb.DomainError):
        zb.bound_parameters(3, 0.1, 0.2, 1.0, 4, 1.0, "other")
    with pytest.raises(zb.DegenerateMeasurementError):
        zb.bound_parameters(3, 0.1, 0.2, 1.0, 4, 0.0)


def test_bound_parameter_values():
    params = zb.bound_parameters(3, 0.1, 0.2, 1.0, 4, 1.0, "group")
    assert params.q_effective == 2
    assert params.zeta == pytest.approx(1 / math.cosh(1.0), abs=1e-15)
    assert params.xi == pytest.approx((1 / math.cosh(1.0)) ** 2, abs=1e-15)
    assert params.Jm == 0.2
    gens = zb.bound_parameters(3, 0.1, 0.2, 1.0, 4, 1.0, "generators")
    assert gens.q_effective == 1


def test_strong_limit_exact_at_infinite_strength():
    for Q in (1, 3, 15):
        for J0, J1 in ((0.1, 0.2), (0.2, 0.1)):
            for M in (1, 2, 16, 64):
                params = zb.bound_parameters(
                    Q, J0, J1, 1.0, M, math.inf, "group"
                )
                report = zb.theorem1_bound(params)
                assert report.B == report.strong_limit
                assert report.B == zb.strong_limit_bound(Q, J0, J1, 1.0, M)
                assert report.weak_term == 0.0


def test_bound_decreases_toward_strong_limit():
    strong = zb.theorem1_bound(
        zb.bound_parameters(3, 0.1, 0.2, 1.0, 8, math.inf)
    ).B
    previous = math.inf
    for eps in (0.5, 1.0, 2.0, 4.0, 8.0):
        B = zb.theorem1_bound(zb.bound_parameters(3, 0.1, 0.2, 1.0, 8, eps)).B
        assert B >= strong
        assert B <= previous + 1e-15
        previous = B
    assert previous == pytest.approx(strong, rel=1e-4)


def test_bound_zero_without_coupling():
    for eps in (0.5, math.inf):
        report = zb.theorem1_bound(
            zb.bound_parameters(3, 0.4, 0.0, 2.0, 6, eps)
        )
        assert report.B == 0.0
        assert report.B1 == 0.0 or report.B1 is None


def test_generators_bound_dominates_group_bound():
    for Q in (3, 15):
        for eps in (0.5, 1.0, 2.0):
            for M in (1, 4, 32):
                group = zb.theorem1_bound(
                    zb.bound_parameters(Q, 0.1, 0.2, 1.0, M, eps, "group")
                ).B
                gens = zb.theorem1_bound(
                    zb.bound_parameters(Q, 0.1, 0.2, 1.0, M, eps, "generators")
                ).B
                assert gens >= group - 1e-12


def test_branch_selection_consistency():
    """Both rate orderings must produce finite positive bounds."""
    for J0, J1 in ((0.3, 0.1), (0.1, 0.3), (0.2, 0.2)):
        report = zb.theorem1_bound(
            zb.bound_parameters(3, J0, J1, 1.0, 8, 1.0)
        )
        assert math.isfinite(report.B)
        assert report.B > 0.0
        assert report.weak_term >= 0.0


def test_bound_report_to_dict():
    report = zb.theorem1_bound(
        zb.bound_parameters(3, 0.1, 0.2, 1.0, 4, math.inf)
    )
    payload = report.to_dict()
    assert payload["epsilon"] == "inf"
    assert payload["B"] == report.B
    assert payload["B1"] is not None


def test_b1_asymptote():
    params = zb.bound_parameters(3, 0.1, 0.2, 1.0, 10**5, 1.0)
    report = zb.theorem1_bound(params)
    b1 = zb.b1_coefficient(params)
    assert abs(params.M * report.B - b1) / b1 < 0.05
    assert report.B1 == b1


def test_b1_refused_near_zero_strength():
    params = zb.bound_parameters(3, 0.1, 0.2, 1.0, 10, 1e-8)
    with pytest.raises(zb.DomainError):
        zb.b1_coefficient(params)
    assert zb.theorem1_bound(params).B1 is None


# ------------------------------------------------------------------ schedules


def test_tradeoff_tau_verdicts():
    cases = [
        (1.0, 1.0, 0.5, True),
        (1.0, 1.0, 1.2, False),
        (1.0, 2.0, 0.4, True),
        (1.0, 2.0, 0.6, False),
    ]
    for J0, J1, a, expect in cases:
        params = zb.bound_parameters(3, J0, J1, 1.0, 10, 1.0)
        report = zb.tradeoff_tau(params, a)
        assert report.convergent is expect, (J0, J1, a)
        assert len(report.series) == 5
        assert all(v > 0 for v in report.series)


def test_tradeoff_tau_series_tracks_verdict():
    params = zb.bound_parameters(3, 1.0, 1.0, 1.0, 10, 1.0)
    conv = zb.tradeoff_tau(params, 0.5).series
    div = zb.tradeoff_tau(params, 1.2).series
    assert conv[-1] < conv[0]
    assert div[-1] > div[0]


def test_tradeoff_tau_validation():
    params = zb.bound_parameters(3, 1.0, 1.0, 1.0, 10, 1.0)
    with pytest.raises(zb.DomainError):
        zb.tradeoff_tau(params, 0.0)
    degenerate = zb.bound_parameters(3, 0.0, 1.0, 1.0, 10, 1.0)
    with pytest.raises(zb.DomainError):
        zb.tradeoff_tau(degenerate, 0.5)


def test_tradeoff_eps_verdicts():
    params = zb.bound_parameters(3, 0.1, 0.2, 1.0, 10, 1.0)
    shrinking = zb.tradeoff_eps(params, -0.4)
    assert shrinking.convergent
    series = shrinking.series
    assert all(a > b for a, b in zip(series, series[1:]))
    too_fast = zb.tradeoff_eps(params, -0.6)
    assert not too_fast.convergent
    bad = too_fast.series
    assert any(a <= b for a, b in zip(bad, bad[1:]))


# --------------------------------------------------------------- fixed interval


def test_fixed_interval_increasing_in_m():
    values = [
        zb.fixed_interval_bound(3, 0.05, 0.05, 1.0, M).value
        for M in range(1, 51)
    ]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_fixed_interval_expansion_and_flags():
    report = zb.fixed_interval_bound(3, 1.0, 1.0, 0.01, 1)
    assert report.minimizer == 1
    assert report.minimum_value == report.value
    assert report.value == pytest.approx(
        report.small_delta_expansion, rel=1e-3
    )
    assert report.protected
    assert not zb.fixed_interval_bound(3, 1.0, 1.0, 1.5, 1).protected


def test_fixed_interval_validation():
    with pytest.raises(zb.DomainError):
        zb.fixed_interval_bound(3, 0.1, 0.1, 0.0, 5)
    with pytest.raises(zb.DomainError):
        zb.fixed_interval_bound(3, 0.1, 0.1, 0.5, 0)


# ------------------------------------------------------------------ bath tails


def test_bath_moment_bound_value():
    assert zb.bath_moment_bound(3, 2.0, 0.5, 0.25) == pytest.approx(
        (2 * 2.0) ** 3 * 0.5 * 0.25, rel=1e-15
    )
    assert zb.bath_moment_bound(0, 5.0, 1.0, 2.0) == pytest.approx(2.0)
    with pytest.raises(zb.DomainError):
        zb.bath_moment_bound(-1, 1.0, 1.0, 1.0)


def test_lorentzian_moments():
    assert not zb.bounds.lorentzian_moments_diverge(0)
    assert zb.bounds.lorentzian_moments_diverge(1)
    assert zb.bounds.lorentzian_moments_diverge(4)
