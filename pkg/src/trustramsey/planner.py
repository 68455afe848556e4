"""Trust threshold, optimal tax and the brute-force grid oracle.

The optimiser never assumes W(tau) is concave: a coarse scan locates the
grid-global maximum, golden-section search refines it inside the neighbouring
cells, and a final root solve of dW/dtau = 0 polishes the answer below the
noise floor of comparing welfare levels directly.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .economy import Economy, Mode, eval_production, eval_utility
from .errors import (
    BoundaryMaximum,
    DegenerateMarginalUtility,
    DomainError,
    NoConvergence,
    ThresholdDegenerate,
)
from .equilibrium import solve_household
from .stats import default_step, expected_welfare, sufficient_stats, welfare_slope

SCAN_POINTS = 256
GOLDEN_TOL = 1e-10
RAMSEY_TOL = 1e-6
# theta within this distance above theta_bar is treated as a tie (corner);
# theta_bar itself carries finite-difference error of order 1e-11.
TIE_TOL = 1e-9

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class Regime(str, enum.Enum):
    CORNER = "Corner"
    INTERIOR = "Interior"


@dataclass(frozen=True)
class ThresholdResult:
    theta_bar: float
    meb0: float
    mr0: float
    uc0: float
    ug0: float
    in_unit_interval: bool


@dataclass(frozen=True)
class PlannerSolution:
    theta: float
    regime: Regime
    tau_star: float
    w_star: float
    g_star: float
    theta_bar: float
    ramsey_residual: float | None
    iterations: int


def trust_threshold(econ: Economy) -> ThresholdResult:
    """theta_bar = (MEB(0)/MR(0)) * (u_C0/u_G0).

    Raises:
        DegenerateMarginalUtility: u_G at the no-tax allocation is 0 or infinite.
        ThresholdDegenerate: MEB(0) or MR(0) is not positive.
    """
    s = sufficient_stats(econ, 0.0)
    uc0, ug0 = s.uc_honest, s.ug_honest
    if not (math.isfinite(ug0) and ug0 > 0):
        raise DegenerateMarginalUtility(f"u_G at the no-tax allocation is {ug0!r}", ug0)
    if not (s.meb > 0 and s.mr > 0):
        raise ThresholdDegenerate(f"need MEB(0) > 0 and MR(0) > 0, got {s.meb!r}, {s.mr!r}")
    theta_bar = (s.meb / s.mr) * (uc0 / ug0)
    return ThresholdResult(
        theta_bar=theta_bar,
        meb0=s.meb,
        mr0=s.mr,
        uc0=uc0,
        ug0=ug0,
        in_unit_interval=0.0 < theta_bar < 1.0,
    )


def _golden_max(fun, a: float, b: float, tol: float) -> tuple[float, int]:
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = fun(c), fun(d)
    n = 0
    while b - a > tol:
        n += 1
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = fun(d)
    return (a + b) / 2.0, n


def _polish(econ: Economy, lo: float, hi: float, guess: float) -> tuple[float, int]:
    """Root of dW/dtau inside [lo, hi]; returns ``guess`` if no sign change."""
    slope = lambda t: welfare_slope(econ, t)
    s_lo, s_hi = slope(lo), slope(hi)
    if not (s_lo > 0 > s_hi):
        return guess, 0
    root, info = brentq(slope, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps,
                        maxiter=200, full_output=True, disp=False)
    if not info.converged:
        return guess, info.iterations
    return root, info.iterations


def _scan(econ: Economy) -> tuple[np.ndarray, np.ndarray]:
    taus = econ.tau_max * np.arange(SCAN_POINTS) / SCAN_POINTS
    return taus, np.array([expected_welfare(econ, t) for t in taus])


def solve_optimal_tax(econ: Economy) -> PlannerSolution:
    """Welfare-maximising tax rate on [0, tau_max).

    Raises:
        BoundaryMaximum: welfare still rises at the top of the interval.
        ThresholdDegenerate: MEB(0) or MR(0) not positive.
        NoConvergence: propagated from the equilibrium solver.
    """
    try:
        theta_bar = trust_threshold(econ).theta_bar
    except DegenerateMarginalUtility as exc:
        if not math.isinf(exc.u_g0):
            raise
        # infinite marginal value of the first unit of G: any trust justifies taxing
        theta_bar = 0.0

    if econ.theta <= theta_bar + TIE_TOL:
        return PlannerSolution(
            theta=econ.theta,
            regime=Regime.CORNER,
            tau_star=0.0,
            w_star=expected_welfare(econ, 0.0),
            g_star=0.0,
            theta_bar=theta_bar,
            ramsey_residual=None,
            iterations=0,
        )

    taus, values = _scan(econ)
    k = int(np.argmax(values))
    h = default_step(econ.tau_max)
    top = econ.tau_max - 3 * h
    if k == SCAN_POINTS - 1:
        if welfare_slope(econ, top) > 0:
            raise BoundaryMaximum(
                f"welfare still increasing at tau={top:.6g} < tau_max={econ.tau_max!r}"
            )
    lo = taus[max(k - 1, 0)]
    hi = min(taus[k + 1], top) if k + 1 < SCAN_POINTS else top

    fun = lambda t: expected_welfare(econ, t)
    tau_g, n_golden = _golden_max(fun, lo, hi, GOLDEN_TOL)
    tau_star, n_polish = _polish(econ, lo, hi, tau_g)
    if not 0.0 < tau_star < econ.tau_max:
        raise NoConvergence(f"optimiser left the admissible interval: tau={tau_star!r}")

    s = sufficient_stats(econ, tau_star)
    eq = solve_household(econ, tau_star)
    return PlannerSolution(
        theta=econ.theta,
        regime=Regime.INTERIOR,
        tau_star=tau_star,
        w_star=expected_welfare(econ, tau_star),
        g_star=eq.T,
        theta_bar=theta_bar,
        ramsey_residual=s.ramsey_residual,
        iterations=SCAN_POINTS + n_golden + n_polish,
    )


# -- independent grid oracle -------------------------------------------------


def _bisect_labor(residual, n: int, iters: int = 200) -> np.ndarray:
    """Vectorised bisection for a residual decreasing in L."""
    lo = np.full(n, 1e-12)
    hi = np.ones(n)
    for _ in range(200):
        grow = residual(hi) > 0
        if not grow.any():
            break
        lo = np.where(grow, hi, lo)
        hi = np.where(grow, 2.0 * hi, hi)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        pos = residual(mid) > 0
        lo = np.where(pos, mid, lo)
        hi = np.where(pos, hi, mid)
    return 0.5 * (lo + hi)


def _oracle_welfare(econ: Economy, taus: np.ndarray) -> np.ndarray:
    u, f, th = econ.utility, econ.production, econ.theta
    if econ.mode is Mode.ISOELASTIC_NORMALIZED:
        def resid(L):
            Y, fp = eval_production(f, L)
            return fp / Y - u.disutility(L)[1]

        L = np.full_like(taus, _bisect_labor(resid, 1)[0])
        Y, _ = eval_production(f, L)
        C, T = (1.0 - taus) * Y, taus * Y
    else:
        def resid(L):
            Y, fp = eval_production(f, L)
            C = (1.0 - taus) * fp * L + Y - fp * L
            return (1.0 - taus) * fp / C - u.disutility(L)[1]

        L = _bisect_labor(resid, taus.size)
        Y, fp = eval_production(f, L)
        C, T = (1.0 - taus) * fp * L + Y - fp * L, taus * fp * L
    honest, *_ = eval_utility(u, C, T, L)
    opp, *_ = eval_utility(u, C, np.zeros_like(T), L)
    return th * honest + (1.0 - th) * opp


def brute_force_oracle(econ: Economy, grid_step: float) -> tuple[float, float]:
    """Argmax of expected welfare on {0, h, 2h, ...} below tau_max.

    Labour is found by vectorised bisection, independently of the scalar
    solver; ties resolve toward the smaller rate.
    """
    if not 0 < grid_step <= 1e-2:
        raise DomainError(f"grid_step={grid_step!r} outside (0, 1e-2]")
    n = int(math.ceil(econ.tau_max / grid_step))
    taus = np.arange(n) * grid_step
    taus = taus[taus < econ.tau_max]
    values = _oracle_welfare(econ, taus)
    k = int(np.argmax(values))
    return float(taus[k]), float(values[k])


# -- theta sweeps -------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryScan:
    rows: list[tuple[float, Regime, float]]
    first_interior: float | None


def _solve_at(args):
    econ, theta = args
    sol = solve_optimal_tax(econ.with_theta(theta))
    return theta, sol.regime, sol.tau_star


def regime_boundary_scan(econ: Economy, thetas, workers: int | None = None) -> BoundaryScan:
    """Solve the planner at every trust level; rows keep the input order."""
    thetas = [float(t) for t in thetas]
    for t in thetas:
        if not 0 < t < 1:
            raise DomainError(f"theta={t!r} outside (0, 1)")
    jobs = [(econ, t) for t in thetas]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_solve_at, jobs))
    else:
        rows = [_solve_at(j) for j in jobs]
    first = next((t for t, r, _ in rows if r is Regime.INTERIOR), None)
    return BoundaryScan(rows=rows, first_interior=first)
