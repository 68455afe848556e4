"""Run configuration files.

A configuration is an INI document with sections ``[economy]``, ``[utility]``,
``[production]`` and optional ``[schedule]`` and ``[run]``; every entry is a
``key = value`` scalar. Unknown sections or keys are rejected so that a typo in
an economic parameter can never be silently ignored. See configs/ for examples.
"""

from __future__ import annotations

import configparser
import io
import math
import re
from dataclasses import asdict, dataclass

from .economy import Economy, build_economy
from .errors import IncompatibleMode, InvalidParameter, TrustRamseyError


class ParseError(TrustRamseyError):
    def __init__(self, message: str, line: int | None = None, key: str | None = None):
        self.line = line
        self.key = key
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


class ValidationError(TrustRamseyError, ValueError):
    def __init__(self, field: str, value, bound: str):
        self.field = field
        self.value = value
        self.bound = bound
        super().__init__(f"{field}={value!r} violates {bound}")


# section -> {key: RunConfig field}
SCHEMA = {
    "economy": {"mode": "mode", "theta": "theta", "tau_max": "tau_max"},
    "utility": {"family": "utility", "psi": "psi", "eta": "eta", "g": "g", "gamma": "gamma"},
    "production": {"family": "production", "A": "A", "alpha": "alpha"},
    "schedule": {"theta_start": "theta_start", "theta_stop": "theta_stop",
                 "theta_step": "theta_step"},
    "run": {"oracle_step": "oracle_step", "oracle_tol": "oracle_tol", "format": "format",
            "output": "output", "workers": "workers"},
}
_STRINGS = {"mode", "utility", "production", "format", "output"}
_INTS = {"workers"}
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class RunConfig:
    mode: str = "IsoelasticNormalized"
    tau_max: float = 0.99
    theta: float | None = None
    utility: str = "LogSeparable"
    psi: float = 1.0
    eta: float = 0.0
    g: float = 1.0
    gamma: float = 0.0
    production: str = "Power"
    A: float = 1.0
    alpha: float = 0.5
    theta_start: float | None = None
    theta_stop: float | None = None
    theta_step: float | None = None
    oracle_step: float = 1e-4
    oracle_tol: float | None = None
    format: str = "csv"
    output: str | None = None
    workers: int = 1

    def economy(self, theta: float | None = None) -> Economy:
        theta = self.theta if theta is None else theta
        if theta is None:
            raise ValidationError("theta", None, "a trust level in (0, 1) is required")
        params = {k: getattr(self, k) for k in
                  ("mode", "tau_max", "utility", "psi", "eta", "g", "gamma",
                   "production", "A", "alpha")}
        params["theta"] = theta
        return build_economy(params)

    @property
    def has_grid(self) -> bool:
        return self.theta_start is not None

    def theta_grid(self) -> list[float]:
        if not self.has_grid:
            return [] if self.theta is None else [self.theta]
        n = int(math.floor((self.theta_stop - self.theta_start) / self.theta_step + 1e-9)) + 1
        return [round(self.theta_start + i * self.theta_step, 12) for i in range(n)]

    @property
    def effective_oracle_tol(self) -> float:
        return self.oracle_step if self.oracle_tol is None else self.oracle_tol

    def to_text(self) -> str:
        """Serialise back to the configuration format (round-trips exactly)."""
        values = asdict(self)
        defaults = RunConfig()
        out = io.StringIO()
        for section, keys in SCHEMA.items():
            lines = []
            for key, attr in keys.items():
                v = values[attr]
                if v is None or (section in ("schedule", "run") and v == getattr(defaults, attr)):
                    continue
                lines.append(f"{key} = {v!r}" if isinstance(v, float) else f"{key} = {v}")
            if lines or section in ("economy", "utility", "production"):
                out.write(f"[{section}]\n" + "\n".join(lines) + "\n\n")
        return out.getvalue()


def _line_of(text: str, section: str, key: str | None = None) -> int | None:
    current = None
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        m = re.match(r"\[(.+)\]$", line)
        if m:
            current = m.group(1).strip()
            if key is None and current == section:
                return no
        elif key is not None and current == section and re.match(
            rf"{re.escape(key)}\s*[=:]", line, re.IGNORECASE
        ):
            return no
    return None


def _convert(attr: str, raw: str):
    if attr in _STRINGS:
        return raw
    try:
        return int(raw) if attr in _INTS else float(raw)
    except ValueError:
        kind = "an integer" if attr in _INTS else "a number"
        raise ValidationError(attr, raw, kind) from None


def parse_config(text: str) -> RunConfig:
    """Parse and validate a configuration document.

    Raises:
        ParseError: malformed syntax, unknown section or unknown key (with line).
        ValidationError: a value is out of bounds (names the field and bound).
    """
    parser = configparser.ConfigParser(interpolation=None, default_section="\x00")
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ParseError(str(exc).splitlines()[0], getattr(exc, "lineno", None)) from None

    values = {}
    for section in parser.sections():
        if section not in SCHEMA:
            raise ParseError(f"unknown section [{section}]", _line_of(text, section), section)
        for key, raw in parser.items(section):
            if key not in SCHEMA[section]:
                raise ParseError(f"unknown key {key!r} in [{section}]",
                                 _line_of(text, section, key), key)
            attr = SCHEMA[section][key]
            values[attr] = _convert(attr, raw.strip())
    return validate(RunConfig(**values))


def validate(cfg: RunConfig) -> RunConfig:
    if cfg.theta is not None and not 0 < cfg.theta < 1:
        raise ValidationError("theta", cfg.theta, "(0, 1)")
    grid = (cfg.theta_start, cfg.theta_stop, cfg.theta_step)
    if any(v is not None for v in grid):
        if any(v is None for v in grid):
            raise ValidationError("theta_grid", grid, "theta_start, theta_stop and theta_step together")
        start, stop, step = grid
        if not 0 < start < 1:
            raise ValidationError("theta_start", start, "(0, 1)")
        if not 0 < stop < 1:
            raise ValidationError("theta_stop", stop, "(0, 1)")
        if not stop > start:
            raise ValidationError("theta_stop", stop, f"theta_stop > theta_start={start!r}")
        if not step > 0:
            raise ValidationError("theta_step", step, "theta_step > 0")
    if not cfg.oracle_step > 0 or cfg.oracle_step > 1e-2:
        raise ValidationError("oracle_step", cfg.oracle_step, "(0, 1e-2]")
    if cfg.oracle_tol is not None and not cfg.oracle_tol > 0:
        raise ValidationError("oracle_tol", cfg.oracle_tol, "oracle_tol > 0")
    if cfg.format not in FORMATS:
        raise ValidationError("format", cfg.format, "one of {csv, json}")
    if cfg.workers < 1:
        raise ValidationError("workers", cfg.workers, "workers >= 1")
    try:
        cfg.economy(0.5 if cfg.theta is None else cfg.theta)
    except InvalidParameter as exc:
        raise ValidationError(exc.field, exc.value, exc.bound) from None
    except IncompatibleMode as exc:
        raise ValidationError("mode", cfg.mode, str(exc)) from None
    return cfg
