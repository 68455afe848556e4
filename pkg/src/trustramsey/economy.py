"""Economic primitives: preferences, technology and the trust parameter.

Utility and production are closed parametric families. All evaluators work on
Python floats and on numpy arrays alike, so the same primitives back both the
scalar solvers and the vectorised brute-force oracle.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Any, Mapping

import numpy as np

from .errors import DomainError, IncompatibleMode, InvalidParameter


class UtilityFamily(str, enum.Enum):
    LOG_SEPARABLE = "LogSeparable"
    POWER_G = "PowerG"


class ProductionFamily(str, enum.Enum):
    POWER = "Power"


class Mode(str, enum.Enum):
    ISOELASTIC_NORMALIZED = "IsoelasticNormalized"
    GENERAL_LABOR_TAX = "GeneralLaborTax"


def _finite(name: str, value: float) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise InvalidParameter(name, value, "a finite real number") from None
    if not math.isfinite(value):
        raise InvalidParameter(name, value, "a finite real number")
    return value


@dataclass(frozen=True)
class UtilitySpec:
    """u(C, G, L) = ln C - psi * L**(1+eta)/(1+eta) + v(G).

    v(G) = g*G for LogSeparable and g*G**(1-gamma)/(1-gamma) for PowerG.
    """

    family: UtilityFamily = UtilityFamily.LOG_SEPARABLE
    psi: float = 1.0
    eta: float = 1.0
    g: float = 1.0
    gamma: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "family", UtilityFamily(self.family))
        for name in ("psi", "eta", "g", "gamma"):
            object.__setattr__(self, name, _finite(name, getattr(self, name)))
        if self.psi <= 0:
            raise InvalidParameter("psi", self.psi, "psi > 0")
        if self.eta < 0:
            raise InvalidParameter("eta", self.eta, "eta >= 0")
        if self.g <= 0:
            raise InvalidParameter("g", self.g, "g > 0")
        if self.family is UtilityFamily.POWER_G:
            if not 0 <= self.gamma < 1:
                raise InvalidParameter("gamma", self.gamma, "0 <= gamma < 1")
        elif self.gamma != 0:
            raise InvalidParameter("gamma", self.gamma, "gamma = 0 for LogSeparable")

    def disutility(self, L):
        """Labour disutility phi(L) and its derivative phi'(L)."""
        phi = self.psi * np.power(L, 1.0 + self.eta) / (1.0 + self.eta)
        dphi = self.psi * np.power(L, self.eta)
        return phi, dphi


@dataclass(frozen=True)
class ProductionSpec:
    """f(L) = A * L**alpha with A > 0 and 0 < alpha < 1."""

    family: ProductionFamily = ProductionFamily.POWER
    A: float = 1.0
    alpha: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "family", ProductionFamily(self.family))
        object.__setattr__(self, "A", _finite("A", self.A))
        object.__setattr__(self, "alpha", _finite("alpha", self.alpha))
        if self.A <= 0:
            raise InvalidParameter("A", self.A, "A > 0")
        if not 0 < self.alpha < 1:
            raise InvalidParameter("alpha", self.alpha, "0 < alpha < 1")


@dataclass(frozen=True)
class Economy:
    utility: UtilitySpec = field(default_factory=UtilitySpec)
    production: ProductionSpec = field(default_factory=ProductionSpec)
    theta: float = 0.9
    tau_max: float = 0.99
    mode: Mode = Mode.GENERAL_LABOR_TAX

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "theta", _finite("theta", self.theta))
        object.__setattr__(self, "tau_max", _finite("tau_max", self.tau_max))
        if not 0 < self.theta < 1:
            raise InvalidParameter("theta", self.theta, "0 < theta < 1")
        if not 0 < self.tau_max <= 1:
            raise InvalidParameter("tau_max", self.tau_max, "0 < tau_max <= 1")
        if self.mode is Mode.ISOELASTIC_NORMALIZED:
            if self.utility.family is not UtilityFamily.LOG_SEPARABLE:
                raise IncompatibleMode(
                    f"mode {self.mode.value} requires LogSeparable utility, "
                    f"got {self.utility.family.value}"
                )
            if self.utility.g != 1.0:
                raise IncompatibleMode(
                    f"mode {self.mode.value} requires g = 1, got g={self.utility.g!r}"
                )

    def with_theta(self, theta: float) -> "Economy":
        return replace(self, theta=theta)


_UTILITY_KEYS = ("psi", "eta", "g", "gamma")
_PRODUCTION_KEYS = ("A", "alpha")


def build_economy(params: Mapping[str, Any]) -> Economy:
    """Build a validated Economy from a flat parameter mapping.

    Recognised keys: ``utility`` (family name), ``psi``, ``eta``, ``g``,
    ``gamma``, ``production`` (family name), ``A``, ``alpha``, ``theta``,
    ``tau_max`` and ``mode``. Missing keys take the dataclass defaults.

    Raises:
        InvalidParameter: a value is out of bounds or an unknown key is given.
        IncompatibleMode: utility family and mode cannot be combined.
    """
    known = {"utility", "production", "theta", "tau_max", "mode",
             *_UTILITY_KEYS, *_PRODUCTION_KEYS}
    for key in params:
        if key not in known:
            raise InvalidParameter(key, params[key], "a recognised economy parameter")

    def _enum(cls, key, default):
        raw = params.get(key, default)
        try:
            return cls(raw)
        except ValueError:
            allowed = ", ".join(m.value for m in cls)
            raise InvalidParameter(key, raw, f"one of {{{allowed}}}") from None

    utility = UtilitySpec(
        family=_enum(UtilityFamily, "utility", UtilityFamily.LOG_SEPARABLE),
        **{k: params[k] for k in _UTILITY_KEYS if k in params},
    )
    production = ProductionSpec(
        family=_enum(ProductionFamily, "production", ProductionFamily.POWER),
        **{k: params[k] for k in _PRODUCTION_KEYS if k in params},
    )
    kwargs = {k: params[k] for k in ("theta", "tau_max") if k in params}
    return Economy(
        utility=utility,
        production=production,
        mode=_enum(Mode, "mode", Mode.GENERAL_LABOR_TAX),
        **kwargs,
    )


def eval_utility(u: UtilitySpec, C, G, L):
    """Return (u, u_C, u_G, u_L) at (C, G, L).

    At G = 0 with PowerG and gamma > 0 the marginal utility u_G is +inf.

    Raises:
        DomainError: if C <= 0 anywhere, or G or L is negative.
    """
    if isinstance(C, float) and isinstance(G, float) and isinstance(L, float):
        return _eval_utility_scalar(u, C, G, L)
    C_arr, G_arr, L_arr = np.asarray(C), np.asarray(G), np.asarray(L)
    if np.any(C_arr <= 0):
        raise DomainError("consumption must be positive")
    if np.any(G_arr < 0) or np.any(L_arr < 0):
        raise DomainError("public good and labour must be non-negative")

    phi, dphi = u.disutility(L)
    if u.family is UtilityFamily.LOG_SEPARABLE:
        v = u.g * G
        u_g = u.g * np.ones_like(G_arr, dtype=float)
    else:
        one_m = 1.0 - u.gamma
        v = u.g * np.power(G, one_m) / one_m
        with np.errstate(divide="ignore"):
            u_g = u.g * np.power(np.asarray(G, dtype=float), -u.gamma)
    value = np.log(C) - phi + v
    u_c = 1.0 / np.asarray(C, dtype=float)
    if np.ndim(value) == 0:
        return float(value), float(u_c), float(u_g), float(-dphi)
    return value, u_c, np.broadcast_to(u_g, np.shape(value)), -dphi


def _eval_utility_scalar(u: UtilitySpec, C: float, G: float, L: float):
    # the planner calls this thousands of times per solve; numpy scalars are slow here
    if C <= 0:
        raise DomainError("consumption must be positive")
    if G < 0 or L < 0:
        raise DomainError("public good and labour must be non-negative")
    phi = u.psi * L ** (1.0 + u.eta) / (1.0 + u.eta)
    dphi = u.psi * L ** u.eta
    if u.family is UtilityFamily.LOG_SEPARABLE:
        v, u_g = u.g * G, u.g
    else:
        one_m = 1.0 - u.gamma
        v = u.g * G ** one_m / one_m
        u_g = u.g * G ** -u.gamma if G > 0 else (math.inf if u.gamma > 0 else u.g)
    return math.log(C) - phi + v, 1.0 / C, u_g, -dphi


def eval_production(f: ProductionSpec, L):
    """Return (Y, f'(L)); the marginal product is +inf at L = 0.

    Raises:
        DomainError: on negative labour.
    """
    if isinstance(L, float):
        if L < 0:
            raise DomainError("labour must be non-negative")
        fprime = f.A * f.alpha * L ** (f.alpha - 1.0) if L > 0 else math.inf
        return f.A * L ** f.alpha, fprime
    L_arr = np.asarray(L, dtype=float)
    if np.any(L_arr < 0):
        raise DomainError("labour must be non-negative")
    Y = f.A * np.power(L_arr, f.alpha)
    with np.errstate(divide="ignore"):
        fprime = f.A * f.alpha * np.power(L_arr, f.alpha - 1.0)
    if L_arr.ndim == 0:
        return float(Y), float(fprime)
    return Y, fprime
