import math

import numpy as np
import pytest
from conftest import SQRT2, general_economies, general_labor_closed_form, iso_economies
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import bisect, minimize_scalar

from trustramsey import Economy, ProductionSpec, UtilitySpec, revenue_curve, solve_household
from trustramsey.equilibrium import RevenueCurveError, household_foc, no_tax_labor
from trustramsey.errors import DomainError


@pytest.mark.parametrize("tau", [0.0, 0.3, 0.7])
def test_iso_labour_is_tau_invariant(iso_sqrt2, tau):
    eq = solve_household(iso_sqrt2, tau)
    assert eq.L == pytest.approx(0.5, abs=1e-15)
    assert eq.Y == pytest.approx(SQRT2, abs=1e-14)
    assert eq.C == pytest.approx((1 - tau) * SQRT2, abs=1e-14)
    assert abs(eq.C - (1 - tau) * eq.Y) <= 1e-10 * max(1, eq.C)


@settings(max_examples=40, deadline=None)
@given(iso_economies())
def test_no_tax_labour_maximises_log_output_minus_disutility(econ):
    u, f = econ.utility, econ.production
    obj = lambda L: -(math.log(f.A * L ** f.alpha) - u.disutility(L)[0])
    res = minimize_scalar(obj, bounds=(1e-6, 20.0), method="bounded",
                          options={"xatol": 1e-10})
    assert no_tax_labor(econ) == pytest.approx(res.x, abs=1e-6)


@pytest.mark.parametrize("tau,expected", [(0.0, 2 ** -0.5), (0.5, (1 / 3) ** 0.5)])
def test_general_labour_closed_form(general, tau, expected):
    eq = solve_household(general, tau)
    assert eq.L == pytest.approx(expected, abs=1e-12)
    assert eq.L == pytest.approx(general_labor_closed_form(tau), abs=1e-12)
    # independent cross-check: plain bisection on the FOC
    root = bisect(lambda L: household_foc(general, tau, L), 1e-6, 10.0, xtol=1e-15)
    assert eq.L == pytest.approx(root, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(general_economies(), st.floats(0.0, 0.95))
def test_general_equilibrium_identities(econ, tau):
    eq = solve_household(econ, tau)
    u, f = econ.utility, econ.production
    expected_L = general_labor_closed_form(tau, f.A, f.alpha, u.psi, u.eta)
    assert eq.L == pytest.approx(expected_L, rel=1e-10)
    assert eq.T == tau * eq.B
    assert abs(eq.C - ((1 - tau) * eq.w * eq.L + eq.Pi)) <= 1e-10 * max(1, eq.C)
    assert eq.w == pytest.approx(f.A * f.alpha * eq.L ** (f.alpha - 1), rel=1e-12)
    assert eq.B == pytest.approx(eq.w * eq.L, rel=1e-15)


def test_revenue_curve_iso(iso_sqrt2):
    rows = revenue_curve(iso_sqrt2, [0.0, 0.5])
    assert rows[0] == pytest.approx((0.0, SQRT2, 0.0), abs=1e-14)
    assert rows[1] == pytest.approx((0.5, SQRT2, SQRT2 / 2), abs=1e-14)


def test_revenue_curve_general_base_shrinks(general):
    (t0, b0, r0), (t1, b1, r1) = revenue_curve(general, [0.0, 0.5])
    assert r0 == 0.0
    # B = w L = 0.5 sqrt(L) with L from the closed form
    assert b0 == pytest.approx(0.5 * general_labor_closed_form(0.0) ** 0.5, rel=1e-12)
    assert b1 == pytest.approx(0.5 * general_labor_closed_form(0.5) ** 0.5, rel=1e-12)
    assert b1 * 0.5 < b0 * 0.5


def test_general_base_non_increasing(general):
    taus = np.linspace(0, 0.95, 40)
    bases = [b for _, b, _ in revenue_curve(general, taus)]
    assert all(b2 <= b1 for b1, b2 in zip(bases, bases[1:]))


def test_revenue_curve_attaches_tau():
    econ = Economy(tau_max=0.5)
    with pytest.raises(RevenueCurveError) as err:
        revenue_curve(econ, [0.1, 0.6])
    assert err.value.tau == 0.6
    with pytest.raises(DomainError):
        revenue_curve(econ, [0.3, 0.1])


@pytest.mark.parametrize("tau", [-0.1, 0.99, 1.0])
def test_tau_outside_interval(general, tau):
    with pytest.raises(DomainError):
        solve_household(general, tau)


def test_iso_tau_invariance_random(iso_sqrt2):
    rng = np.random.default_rng(7)
    L0 = solve_household(iso_sqrt2, 0.0).L
    for tau in rng.uniform(0, iso_sqrt2.tau_max, 20):
        assert abs(solve_household(iso_sqrt2, tau).L - L0) <= 1e-10


def test_solver_is_bitwise_deterministic(general):
    a = solve_household(general, 0.37)
    b = solve_household(general, 0.37)
    assert a == b


def test_public_good_curvature_does_not_move_labour():
    base = dict(psi=1.2, eta=0.5, g=1.0)
    lin = Economy(utility=UtilitySpec(**base), production=ProductionSpec(A=1.5, alpha=0.4))
    pow_ = Economy(utility=UtilitySpec(family="PowerG", gamma=0.5, **base),
                   production=ProductionSpec(A=1.5, alpha=0.4))
    assert solve_household(lin, 0.3).L == solve_household(pow_, 0.3).L
