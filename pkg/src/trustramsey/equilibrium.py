"""Private equilibrium induced by a tax rate.

GeneralLaborTax: labour income w*L is taxed at rate tau, profits f(L) - w*L are
rebated lump sum, and the household picks L from

    (1 - tau) * w * E[u_C] + E[u_L] = 0,     w = f'(L),

taking w, profits and the public-good lottery as given.

IsoelasticNormalized: the household supplies the no-tax labour L0 solving
max_L ln f(L) - phi(L) at every tau, output Y* = f(L0) is the tax base and
consumption is (1 - tau) * Y*.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .economy import Economy, Mode, eval_production, eval_utility
from .errors import DegenerateAllocation, DomainError, NoConvergence, SolverError

L_LOW = 1e-9
FOC_TOL = 1e-12
MAX_ITER = 200
_MAX_GROW = 200


@dataclass(frozen=True)
class Equilibrium:
    tau: float
    L: float
    C: float
    Y: float
    w: float
    Pi: float
    B: float
    T: float


def _check_tau(econ: Economy, tau: float) -> float:
    tau = float(tau)
    if not (0.0 <= tau < econ.tau_max and tau < 1.0):
        raise DomainError(f"tau={tau!r} outside [0, {econ.tau_max!r})")
    return tau


def _general_consumption(econ: Economy, tau, L):
    Y, w = eval_production(econ.production, L)
    return (1.0 - tau) * w * L + Y - w * L, Y, w


def household_foc(econ: Economy, tau: float, L: float) -> float:
    """Residual of the labour first-order condition in GeneralLaborTax mode."""
    C, Y, w = _general_consumption(econ, tau, L)
    if C <= 0:
        raise DegenerateAllocation(f"non-positive consumption C={C!r} at tau={tau!r}")
    G_honest = tau * w * L
    th = econ.theta
    _, uc_h, _, ul_h = eval_utility(econ.utility, C, G_honest, L)
    _, uc_o, _, ul_o = eval_utility(econ.utility, C, 0.0, L)
    uc = th * uc_h + (1.0 - th) * uc_o
    ul = th * ul_h + (1.0 - th) * ul_o
    return (1.0 - tau) * w * uc + ul


def no_tax_labor(econ: Economy) -> float:
    """Labour L0 maximising ln f(L) - phi(L).

    For power technology f'(L)/f(L) = alpha/L, so the first-order condition
    alpha/L = psi * L**eta solves in closed form.
    """
    u, f = econ.utility, econ.production
    return (f.alpha / u.psi) ** (1.0 / (1.0 + u.eta))


def _bracketed_root(fun, lo: float) -> tuple[float, float]:
    f_lo = fun(lo)
    if not f_lo > 0:
        raise NoConvergence(f"first-order condition not positive at L={lo!r}")
    hi = 1.0
    for _ in range(_MAX_GROW):
        if fun(hi) < 0:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise NoConvergence("could not bracket the labour first-order condition")
    root, info = brentq(fun, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps,
                        maxiter=MAX_ITER, full_output=True, disp=False)
    if not info.converged:
        raise NoConvergence(f"brentq stopped after {info.iterations} iterations")
    return root, fun(root)


def solve_household(econ: Economy, tau: float) -> Equilibrium:
    """Equilibrium allocation at tax rate ``tau``.

    Raises:
        DomainError: tau outside [0, tau_max).
        NoConvergence: the labour condition could not be bracketed or solved.
        DegenerateAllocation: consumption would be non-positive.
    """
    tau = _check_tau(econ, tau)
    if econ.mode is Mode.ISOELASTIC_NORMALIZED:
        L = no_tax_labor(econ)
        Y, w = eval_production(econ.production, L)
        C = (1.0 - tau) * Y
        B = Y
    else:
        L, resid = _bracketed_root(lambda x: household_foc(econ, tau, x), L_LOW)
        _, dphi = econ.utility.disutility(L)
        if abs(resid) > FOC_TOL * max(1.0, dphi):
            raise NoConvergence(f"labour residual {resid!r} above tolerance at tau={tau!r}")
        C, Y, w = _general_consumption(econ, tau, L)
        B = w * L
    if not C > 0:
        raise DegenerateAllocation(f"non-positive consumption C={C!r} at tau={tau!r}")
    return Equilibrium(tau=tau, L=L, C=C, Y=Y, w=w, Pi=Y - w * L, B=B, T=tau * B)


class RevenueCurveError(SolverError):
    def __init__(self, tau: float, cause: Exception):
        self.tau = tau
        self.cause = cause
        super().__init__(f"at tau={tau!r}: {type(cause).__name__}: {cause}")


def revenue_curve(econ: Economy, taus) -> list[tuple[float, float, float]]:
    """(tau, base, revenue) for each rate of an ascending grid."""
    taus = [float(t) for t in taus]
    if any(b < a for a, b in zip(taus, taus[1:])):
        raise DomainError("tax grid must be ascending")
    out = []
    for tau in taus:
        try:
            eq = solve_household(econ, tau)
        except (SolverError, DomainError) as exc:
            raise RevenueCurveError(float(tau), exc) from exc
        out.append((eq.tau, eq.B, eq.T))
    return out


