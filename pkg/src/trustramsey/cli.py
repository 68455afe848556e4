"""Command-line front end.

Exit codes: 0 success, 1 bad configuration, 2 solver error, 3 empty schedule,
4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .config import ParseError, RunConfig, ValidationError, parse_config, validate
from .economy import Mode, UtilityFamily
from .errors import TrustRamseyError
from .isoelastic import iso_crosscheck, iso_solution
from .planner import (
    RAMSEY_TOL,
    Regime,
    brute_force_oracle,
    solve_optimal_tax,
    trust_threshold,
)
from .stats import check_decomposition, sufficient_stats

EXIT_OK, EXIT_CONFIG, EXIT_SOLVE, EXIT_EMPTY, EXIT_VERIFY = 0, 1, 2, 3, 4

SCHEDULE_COLUMNS = ("theta", "regime", "tau_star", "revenue", "g_star", "welfare",
                    "theta_bar", "meb", "mr", "mvf", "ramsey_residual")
CSV_HEADER = ",".join(SCHEDULE_COLUMNS)

DECOMPOSITION_TOL = 1e-6
CROSSCHECK_TOL = 1e-8


class CommandFailed(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def fmt(x) -> str:
    """12 significant digits; blank for missing values."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    return format(float(x), ".12g")


# -- rows ---------------------------------------------------------------------


def schedule_row(cfg: RunConfig, theta: float) -> dict:
    row = dict.fromkeys(SCHEDULE_COLUMNS)
    row["theta"] = theta
    try:
        econ = cfg.economy(theta)
        sol = solve_optimal_tax(econ)
        s = sufficient_stats(econ, sol.tau_star)
    except TrustRamseyError as exc:
        row["regime"] = f"error:{type(exc).__name__}"
        return row
    row.update(
        regime=sol.regime.value,
        tau_star=sol.tau_star,
        revenue=sol.g_star,
        g_star=sol.g_star,
        welfare=sol.w_star,
        theta_bar=sol.theta_bar,
        meb=s.meb,
        mr=s.mr,
        mvf=s.mvf,
        ramsey_residual=sol.ramsey_residual,
    )
    return row


def _row_job(args):
    return schedule_row(*args)


def build_schedule(cfg: RunConfig, workers: int = 1) -> list[dict]:
    jobs = [(cfg, t) for t in sorted(cfg.theta_grid())]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_row_job, jobs))
    return [schedule_row(*j) for j in jobs]


def render_rows(rows: list[dict], form: str) -> str:
    if form == "json":
        clean = [{k: (float(v) if isinstance(v, (float, np.floating)) else v)
                  for k, v in r.items()} for r in rows]
        return json.dumps(clean, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCHEDULE_COLUMNS)
    for r in rows:
        writer.writerow([fmt(r[c]) for c in SCHEDULE_COLUMNS])
    return buf.getvalue()


def _emit(text: str, output: str | None):
    if output and output != "-":
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _report(cfg: RunConfig, pairs: list[tuple[str, object]]):
    if cfg.format == "json":
        clean = {k: (bool(v) if isinstance(v, np.bool_) else v) for k, v in pairs}
        _emit(json.dumps(clean, indent=2) + "\n", cfg.output)
    else:
        width = max(len(k) for k, _ in pairs)
        _emit("".join(f"{k:<{width}}  {'n/a' if v is None else fmt(v)}\n" for k, v in pairs),
              cfg.output)


# -- commands -----------------------------------------------------------------


def cmd_solve(cfg: RunConfig) -> int:
    econ = cfg.economy()
    sol = solve_optimal_tax(econ)
    s = sufficient_stats(econ, sol.tau_star)
    _report(cfg, [
        ("theta", econ.theta),
        ("regime", sol.regime.value),
        ("tau_star", sol.tau_star),
        ("g_star", sol.g_star),
        ("w_star", sol.w_star),
        ("theta_bar", sol.theta_bar),
        ("meb_over_mr", s.meb / s.mr),
        ("mvf", s.mvf),
        ("ramsey_residual", sol.ramsey_residual),
    ])
    return EXIT_OK


def cmd_threshold(cfg: RunConfig) -> int:
    theta = cfg.theta if cfg.theta is not None else (cfg.theta_grid() or [0.5])[0]
    th = trust_threshold(cfg.economy(theta))
    _report(cfg, [(f.name, getattr(th, f.name)) for f in dataclasses.fields(th)])
    return EXIT_OK


def cmd_stats(cfg: RunConfig, tau: float) -> int:
    s = sufficient_stats(cfg.economy(), tau)
    pairs = [(f.name, getattr(s, f.name)) for f in dataclasses.fields(s)]
    pairs.append(("decomposition_residual", s.decomposition_residual))
    _report(cfg, pairs)
    return EXIT_OK


def cmd_oracle(cfg: RunConfig) -> int:
    econ = cfg.economy()
    tau_o, w_o = brute_force_oracle(econ, cfg.oracle_step)
    sol = solve_optimal_tax(econ)
    _report(cfg, [
        ("grid_step", cfg.oracle_step),
        ("oracle_tau", tau_o),
        ("oracle_welfare", w_o),
        ("solver_tau", sol.tau_star),
        ("solver_welfare", sol.w_star),
        ("abs_gap", abs(sol.tau_star - tau_o)),
    ])
    return EXIT_OK


def cmd_compare(cfg: RunConfig) -> int:
    econ = cfg.economy()
    rep = iso_crosscheck(econ)
    closed = iso_solution(rep.y_star, econ.theta)
    _report(cfg, [
        ("y_star", rep.y_star),
        ("closed_theta_bar", closed.theta_bar),
        ("closed_tau_star", closed.tau_star),
        ("closed_g_star", closed.g_star),
        ("gap_threshold", rep.threshold),
        ("gap_tau_star", rep.tau_star),
        ("gap_derivative", rep.derivative),
    ])
    return EXIT_OK


def verification_checks(cfg: RunConfig) -> list[tuple[str, float, float]]:
    """(name, measured, tolerance) for every check that applies to ``cfg``."""
    econ = cfg.economy()
    taus = np.linspace(0.0, 0.9 * econ.tau_max, 50)
    if econ.utility.family is UtilityFamily.POWER_G and econ.utility.gamma > 0:
        # u_G is infinite at G = 0, so the origin has no finite decomposition
        taus = np.linspace(taus[1], taus[-1], 50)
    checks = [("decomposition", check_decomposition(econ, taus), DECOMPOSITION_TOL)]
    tau_o, _ = brute_force_oracle(econ, cfg.oracle_step)
    sol = solve_optimal_tax(econ)
    checks.append(("oracle", abs(sol.tau_star - tau_o), cfg.effective_oracle_tol))
    if sol.regime is Regime.INTERIOR:
        checks.append(("ramsey_rule", sol.ramsey_residual, RAMSEY_TOL))
    if econ.mode is Mode.ISOELASTIC_NORMALIZED:
        checks.append(("iso_crosscheck", iso_crosscheck(econ).worst, CROSSCHECK_TOL))
    return checks


def cmd_verify(cfg: RunConfig) -> int:
    checks = verification_checks(cfg)
    failed = [name for name, value, tol in checks if not value <= tol]
    lines = [f"{name:<16} {fmt(value):>20}  tol={tol:g}  {'PASS' if value <= tol else 'FAIL'}\n"
             for name, value, tol in checks]
    _emit("".join(lines), cfg.output)
    if failed:
        raise CommandFailed(EXIT_VERIFY, "verification failed: " + ", ".join(failed))
    return EXIT_OK


def cmd_schedule(cfg: RunConfig) -> int:
    if not cfg.theta_grid():
        raise CommandFailed(EXIT_EMPTY, "empty schedule: no theta or theta grid given")
    rows = build_schedule(cfg, cfg.workers)
    _emit(render_rows(rows, cfg.format), cfg.output)
    if not any(r["regime"] in (Regime.CORNER.value, Regime.INTERIOR.value) for r in rows):
        raise CommandFailed(EXIT_EMPTY, "empty schedule: every row failed")
    return EXIT_OK


# -- argument handling --------------------------------------------------------


def _theta_grid_arg(text: str) -> tuple[float, float, float]:
    try:
        start, stop, step = (float(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("expected start:stop:step") from None
    return start, stop, step


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, type=Path, help="configuration file")
    common.add_argument("--output", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--theta", type=float, help="override the trust level")
    common.add_argument("--theta-grid", type=_theta_grid_arg, metavar="START:STOP:STEP")
    common.add_argument("--oracle-step", type=float)
    common.add_argument("--oracle-tol", type=float,
                        help="precision claimed for the oracle check (default: the step)")
    common.add_argument("--workers", type=int, help="parallel processes for schedules")

    parser = argparse.ArgumentParser(prog="trustramsey", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in [
        ("solve", "optimal tax at one trust level"),
        ("threshold", "trust threshold and its components"),
        ("schedule", "optimal policy over a grid of trust levels"),
        ("stats", "sufficient statistics at one tax rate"),
        ("oracle", "brute-force grid search against the solver"),
        ("verify", "run all consistency checks"),
        ("compare", "closed forms against the numerical pipeline"),
    ]:
        p = sub.add_parser(name, parents=[common], help=text)
        if name == "stats":
            p.add_argument("--tau", type=float, default=0.0)
    return parser


def load_config(args) -> RunConfig:
    cfg = parse_config(args.config.read_text())
    overrides = {}
    for attr in ("output", "format", "theta", "oracle_step", "oracle_tol", "workers"):
        value = getattr(args, attr)
        if value is not None:
            overrides[attr] = value
    if args.theta_grid is not None:
        overrides.update(zip(("theta_start", "theta_stop", "theta_step"), args.theta_grid))
    return validate(dataclasses.replace(cfg, **overrides))


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
    except (ParseError, ValidationError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    commands = {
        "solve": cmd_solve,
        "threshold": cmd_threshold,
        "schedule": cmd_schedule,
        "stats": lambda c: cmd_stats(c, args.tau),
        "oracle": cmd_oracle,
        "verify": cmd_verify,
        "compare": cmd_compare,
    }
    try:
        return commands[args.command](cfg)
    except CommandFailed as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except ValidationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TrustRamseyError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVE


if __name__ == "__main__":
    sys.exit(main())
