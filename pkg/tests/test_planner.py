import math

import numpy as np
import pytest
from conftest import SQRT2, general_economies, iso_economies
from hypothesis import assume, given, settings

from trustramsey import (
    Economy,
    ProductionSpec,
    Regime,
    UtilitySpec,
    brute_force_oracle,
    expected_welfare,
    iso_economy,
    regime_boundary_scan,
    solve_optimal_tax,
    sufficient_stats,
    trust_threshold,
)
from trustramsey.errors import BoundaryMaximum, DegenerateMarginalUtility, DomainError


# -- threshold -----------------------------------------------------------------


def test_threshold_components_iso2():
    th = trust_threshold(iso_economy(2.0, 0.8))
    assert th.theta_bar == pytest.approx(0.5, abs=1e-9)
    assert (th.meb0, th.mr0) == pytest.approx((2.0, 2.0), abs=1e-9)
    assert (th.uc0, th.ug0) == pytest.approx((0.5, 1.0), abs=1e-15)
    assert th.in_unit_interval
    assert th.theta_bar == (th.meb0 / th.mr0) * (th.uc0 / th.ug0)


def test_threshold_sqrt2(iso_sqrt2):
    assert trust_threshold(iso_sqrt2).theta_bar == pytest.approx(1 / SQRT2, abs=1e-9)


def test_threshold_inverse_in_public_good_weight(general):
    base = trust_threshold(general).theta_bar
    doubled = Economy(utility=UtilitySpec(psi=1.0, eta=1.0, g=2.0),
                      production=general.production, theta=general.theta)
    assert trust_threshold(doubled).theta_bar == pytest.approx(base / 2, rel=1e-12)


def test_threshold_general_mode_is_consumption_over_weight(general):
    # with MEB(0) = MR(0) the threshold reduces to u_C0/u_G0 = 1/(g C0)
    C0 = 2 ** -0.25  # sqrt(L0) with L0 = 2^-1/2
    th = trust_threshold(general)
    assert th.theta_bar == pytest.approx(1 / C0, rel=1e-9)
    assert not th.in_unit_interval


def test_threshold_flags_value_above_one():
    th = trust_threshold(iso_economy(0.8, 0.5))
    assert th.theta_bar == pytest.approx(1.25, rel=1e-9)
    assert not th.in_unit_interval


def test_threshold_degenerate_for_concave_public_good():
    econ = Economy(utility=UtilitySpec(family="PowerG", gamma=0.5))
    with pytest.raises(DegenerateMarginalUtility):
        trust_threshold(econ)
    sol = solve_optimal_tax(econ.with_theta(0.05))
    assert sol.regime is Regime.INTERIOR and sol.theta_bar == 0.0
    assert sol.ramsey_residual <= 1e-6


@settings(max_examples=50, deadline=None)
@given(general_economies())
def test_threshold_sign_consistency_general(econ):
    th = trust_threshold(econ).theta_bar
    assume(abs(econ.theta - th) > 1e-6)
    assert math.copysign(1, sufficient_stats(econ, 0.0).dw_scaled) == math.copysign(1, econ.theta - th)


@settings(max_examples=50, deadline=None)
@given(iso_economies())
def test_threshold_sign_consistency_iso(econ):
    th = trust_threshold(econ).theta_bar
    assume(abs(econ.theta - th) > 1e-6)
    assert math.copysign(1, sufficient_stats(econ, 0.0).dw_scaled) == math.copysign(1, econ.theta - th)


# -- optimal tax -----------------------------------------------------------------


def test_tie_is_corner():
    sol = solve_optimal_tax(iso_economy(2.0, 0.5))
    assert sol.regime is Regime.CORNER
    assert sol.tau_star == 0.0 and sol.g_star == 0.0
    assert sol.ramsey_residual is None


def test_near_full_trust_y2():
    sol = solve_optimal_tax(iso_economy(2.0, 1 - 1e-12))
    assert sol.regime is Regime.INTERIOR
    assert sol.tau_star == pytest.approx(0.5, abs=1e-8)
    assert sol.g_star == pytest.approx(1.0, abs=1e-8)
    assert sol.ramsey_residual <= 1e-6


def test_sqrt2_economy(iso_sqrt2):
    sol = solve_optimal_tax(iso_sqrt2)
    assert sol.regime is Regime.INTERIOR
    tau = 1 - 1 / (0.9 * SQRT2)
    assert sol.tau_star == pytest.approx(tau, abs=1e-8)
    assert sol.tau_star == pytest.approx(0.214326, abs=1e-6)
    assert sol.g_star == pytest.approx(SQRT2 - 1 / 0.9, abs=1e-8)
    assert sol.g_star == pytest.approx(0.303103, abs=1e-6)
    tau_o, _ = brute_force_oracle(iso_sqrt2, 1e-4)
    assert abs(sol.tau_star - tau_o) <= 1e-4


def test_boundary_maximum_is_an_error():
    with pytest.raises(BoundaryMaximum):
        solve_optimal_tax(iso_economy(5.0, 0.999, tau_max=0.2))


def test_optimum_in_last_scan_cell_is_not_a_boundary():
    # tau* = 1 - 1/(0.9 * 5) ~ 0.7778 sits inside the final cell of [0, 0.78)
    econ = iso_economy(5.0, 0.9, tau_max=0.78)
    sol = solve_optimal_tax(econ)
    assert sol.tau_star == pytest.approx(1 - 1 / 4.5, abs=1e-8)


@pytest.mark.parametrize("make", [
    lambda: iso_economy(2.0, 0.8),
    lambda: iso_economy(3.0, 0.2),
    lambda: Economy(utility=UtilitySpec(psi=1.0, eta=1.0, g=3.0),
                    production=ProductionSpec(A=1.0, alpha=0.5), theta=0.9),
])
def test_global_max_certificate(make):
    econ = make()
    sol = solve_optimal_tax(econ)
    grid = np.linspace(0, econ.tau_max, 400, endpoint=False)
    assert all(sol.w_star >= expected_welfare(econ, t) - 1e-12 for t in grid)


@settings(max_examples=25, deadline=None)
@given(iso_economies())
def test_corner_exactness(econ):
    th = trust_threshold(econ).theta_bar
    below = econ.with_theta(min(th, 0.999) * 0.9)
    sol = solve_optimal_tax(below)
    assert sol.tau_star == 0.0 and sol.regime is Regime.CORNER


# -- oracle ----------------------------------------------------------------------


def test_oracle_y2_full_trust():
    tau, w = brute_force_oracle(iso_economy(2.0, 1 - 1e-12), 1e-4)
    assert abs(tau - 0.5) <= 1e-4


def test_oracle_low_trust_zero():
    assert brute_force_oracle(iso_economy(2.0, 0.1), 1e-4)[0] == 0.0


def test_oracle_argmax_dominates_grid(general):
    h = 1e-3
    tau, w = brute_force_oracle(general, h)
    grid = np.arange(int(math.ceil(general.tau_max / h))) * h
    assert all(w >= expected_welfare(general, t) - 1e-12 for t in grid[grid < general.tau_max][::7])


def test_oracle_matches_scalar_pipeline(general):
    # vectorised bisection reproduces the brentq equilibrium welfare
    tau, w = brute_force_oracle(general, 1e-3)
    assert w == pytest.approx(expected_welfare(general, tau), abs=1e-12)


def test_oracle_step_bounds(general):
    with pytest.raises(DomainError):
        brute_force_oracle(general, 0.05)


# -- theta sweeps -------------------------------------------------------------------


def test_regime_switch_y2():
    thetas = np.round(np.arange(0.01, 1.0, 0.01), 10)
    scan = regime_boundary_scan(iso_economy(2.0, 0.5), thetas)
    assert scan.first_interior == pytest.approx(0.51)
    interior = [(t, tau) for t, r, tau in scan.rows if r is Regime.INTERIOR]
    taus = np.array([tau for _, tau in interior])
    assert np.all(np.diff(taus) >= 0)
    assert np.all(np.diff(taus, 2) <= 1e-9)


def test_parallel_scan_preserves_order():
    econ = iso_economy(2.0, 0.5)
    thetas = [0.9, 0.3, 0.7, 0.55]
    serial = regime_boundary_scan(econ, thetas)
    parallel = regime_boundary_scan(econ, thetas, workers=2)
    assert serial.rows == parallel.rows
    assert [r[0] for r in parallel.rows] == thetas


def test_scan_rejects_theta_outside_unit_interval():
    with pytest.raises(DomainError):
        regime_boundary_scan(iso_economy(2.0, 0.5), [0.5, 1.0])
