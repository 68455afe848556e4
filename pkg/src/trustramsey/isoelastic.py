"""Closed forms for log consumption, linear public good and tau-invariant labour.

With Y* the no-tax output, welfare is ln((1 - tau) Y*) - phi(L0) + theta tau Y*,
so the threshold is 1/Y*, the optimal rate 1 - 1/(theta Y*) and honest-state
provision Y* - 1/theta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .economy import Economy, Mode, ProductionSpec, UtilitySpec
from .errors import DomainError, ModeMismatch
from .equilibrium import solve_household
from .planner import solve_optimal_tax, trust_threshold
from .stats import sufficient_stats


@dataclass(frozen=True)
class IsoClosedForm:
    y_star: float
    theta: float
    theta_bar: float
    tau_star: float
    g_star: float

    @property
    def interior(self) -> bool:
        return self.tau_star > 0.0

    def welfare(self, phi_l0: float = 0.0) -> float:
        return math.log((1.0 - self.tau_star) * self.y_star) - phi_l0 + self.theta * self.g_star


@dataclass(frozen=True)
class CrossCheckReport:
    y_star: float
    threshold: float
    tau_star: float
    derivative: float

    @property
    def worst(self) -> float:
        return max(self.threshold, self.tau_star, self.derivative)


def iso_threshold(y_star: float) -> float:
    if not y_star > 0:
        raise DomainError(f"Y*={y_star!r} must be positive")
    return 1.0 / y_star


def iso_solution(y_star: float, theta: float) -> IsoClosedForm:
    theta_bar = iso_threshold(y_star)
    if not 0 < theta < 1:
        raise DomainError(f"theta={theta!r} outside (0, 1)")
    if theta <= theta_bar:
        tau, g = 0.0, 0.0
    else:
        tau, g = 1.0 - 1.0 / (theta * y_star), y_star - 1.0 / theta
    return IsoClosedForm(y_star=y_star, theta=theta, theta_bar=theta_bar, tau_star=tau, g_star=g)


def iso_economy(y_star: float, theta: float, tau_max: float = 0.99,
                alpha: float = 0.5, psi: float = 1.0, eta: float = 0.0) -> Economy:
    """Isoelastic economy whose no-tax output equals ``y_star``.

    L0 = (alpha/psi)**(1/(1+eta)) and A is chosen so that A * L0**alpha = y_star.
    """
    l0 = (alpha / psi) ** (1.0 / (1.0 + eta))
    return Economy(
        utility=UtilitySpec(psi=psi, eta=eta, g=1.0),
        production=ProductionSpec(A=y_star / l0 ** alpha, alpha=alpha),
        theta=theta,
        tau_max=tau_max,
        mode=Mode.ISOELASTIC_NORMALIZED,
    )


def iso_crosscheck(econ: Economy, taus=None) -> CrossCheckReport:
    """Compare the numerical pipeline with the closed forms.

    Returns the absolute gaps in the threshold, the optimal rate, and the
    largest gap between -1/(1-tau) + theta Y* and uc_bar * dW_scaled on ``taus``
    (default: 16 points on [0, 0.75 tau_max]).
    """
    if econ.mode is not Mode.ISOELASTIC_NORMALIZED:
        raise ModeMismatch(f"closed forms need IsoelasticNormalized, got {econ.mode.value}")
    y_star = solve_household(econ, 0.0).Y
    closed = iso_solution(y_star, econ.theta)

    d_threshold = abs(closed.theta_bar - trust_threshold(econ).theta_bar)
    d_tau = abs(closed.tau_star - solve_optimal_tax(econ).tau_star)

    if taus is None:
        taus = np.linspace(0.0, 0.75 * econ.tau_max, 16)
    d_slope = 0.0
    for tau in taus:
        s = sufficient_stats(econ, float(tau))
        exact = -1.0 / (1.0 - tau) + econ.theta * y_star
        d_slope = max(d_slope, abs(exact - s.dw_scaled * s.uc_bar))
    return CrossCheckReport(y_star=y_star, threshold=d_threshold, tau_star=d_tau,
                            derivative=d_slope)
