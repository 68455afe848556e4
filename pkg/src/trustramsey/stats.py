"""Expected welfare and the sufficient statistics MR, MEB and MVF.

All tau-derivatives are finite differences of the equilibrium map with step
h = 1e-5 * max(1, tau). Interior points use the central stencil; within one
step of 0 or tau_max the second-order one-sided stencil with the same h is used
and the result is flagged through ``SufficientStats.stencil``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .economy import Economy, eval_utility
from .equilibrium import Equilibrium, _check_tau, solve_household

STEP_SCALE = 1e-5


@dataclass(frozen=True)
class SufficientStats:
    tau: float
    mr: float
    meb: float
    mvf: float
    dw_scaled: float
    uc_honest: float
    ug_honest: float
    ul_honest: float
    uc_opp: float
    ul_opp: float
    uc_bar: float
    stencil: str

    @property
    def decomposition_residual(self) -> float:
        return abs(self.dw_scaled - (-self.meb + self.mvf * self.mr))

    @property
    def ramsey_residual(self) -> float:
        """|MEB/MR - MVF|; zero exactly at an interior optimum."""
        return abs(self.meb / self.mr - self.mvf)


def default_step(tau: float) -> float:
    return STEP_SCALE * max(1.0, tau)


def _stencil(econ: Economy, tau: float, h: float) -> tuple[str, list[float], list[float]]:
    """Evaluation offsets and weights (to be divided by h) for d/dtau at tau."""
    if tau < h:
        return "forward", [0.0, h, 2 * h], [-1.5, 2.0, -0.5]
    if tau + h >= econ.tau_max or tau + h >= 1.0:
        return "backward", [0.0, -h, -2 * h], [1.5, -2.0, 0.5]
    return "central", [-h, h], [-0.5, 0.5]


def _derivative(econ: Economy, tau: float, h: float, fun: Callable[[float], float]):
    kind, offsets, weights = _stencil(econ, tau, h)
    total = sum(w * fun(tau + d) for d, w in zip(offsets, weights))
    return kind, total / h


def _welfare_at(econ: Economy, eq: Equilibrium) -> float:
    honest, *_ = eval_utility(econ.utility, eq.C, eq.T, eq.L)
    opp, *_ = eval_utility(econ.utility, eq.C, 0.0, eq.L)
    return econ.theta * honest + (1.0 - econ.theta) * opp


def expected_welfare(econ: Economy, tau: float) -> float:
    """theta * u(C, T, L) + (1 - theta) * u(C, 0, L) at the equilibrium of tau."""
    return _welfare_at(econ, solve_household(econ, tau))


def welfare_slope(econ: Economy, tau: float, step: float | None = None) -> float:
    """dW/dtau by finite differences."""
    tau = _check_tau(econ, tau)
    h = default_step(tau) if step is None else step
    return _derivative(econ, tau, h, lambda t: expected_welfare(econ, t))[1]


def sufficient_stats(econ: Economy, tau: float, step: float | None = None) -> SufficientStats:
    """MR, MEB, MVF and the scaled welfare derivative at ``tau``.

    MEB and MVF are normalised by the expected marginal utility of consumption
    uc_bar = theta * u_C(honest) + (1 - theta) * u_C(opportunistic), which makes
    (1/uc_bar) dW/dtau = -MEB + MVF * MR hold up to finite-difference error.
    """
    tau = _check_tau(econ, tau)
    h = default_step(tau) if step is None else step
    th = econ.theta

    kind, offsets, weights = _stencil(econ, tau, h)
    eqs = [solve_household(econ, tau + d) for d in offsets]

    def d(attr):
        return sum(w * getattr(e, attr) for e, w in zip(eqs, weights)) / h

    dC, dL, dT = d("C"), d("L"), d("T")
    dW = sum(w * _welfare_at(econ, e) for e, w in zip(eqs, weights)) / h

    eq = solve_household(econ, tau)
    _, uc_h, ug_h, ul_h = eval_utility(econ.utility, eq.C, eq.T, eq.L)
    _, uc_o, _, ul_o = eval_utility(econ.utility, eq.C, 0.0, eq.L)
    uc_bar = th * uc_h + (1.0 - th) * uc_o
    private = th * (uc_h * dC + ul_h * dL) + (1.0 - th) * (uc_o * dC + ul_o * dL)
    return SufficientStats(
        tau=tau,
        mr=dT,
        meb=-private / uc_bar,
        mvf=th * ug_h / uc_bar,
        dw_scaled=dW / uc_bar,
        uc_honest=uc_h,
        ug_honest=ug_h,
        ul_honest=ul_h,
        uc_opp=uc_o,
        ul_opp=ul_o,
        uc_bar=uc_bar,
        stencil=kind,
    )


def check_decomposition(econ: Economy, taus) -> float:
    """Largest |dW_scaled - (-MEB + MVF * MR)| over a grid of tax rates."""
    return max(sufficient_stats(econ, t).decomposition_residual for t in np.atleast_1d(taus))
