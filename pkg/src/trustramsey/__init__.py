"""Optimal distortionary taxation when government honesty is only partially trusted."""

from .economy import (
    Economy,
    Mode,
    ProductionFamily,
    ProductionSpec,
    UtilityFamily,
    UtilitySpec,
    build_economy,
    eval_production,
    eval_utility,
)
from .equilibrium import Equilibrium, revenue_curve, solve_household
from .isoelastic import IsoClosedForm, iso_crosscheck, iso_economy, iso_solution, iso_threshold
from .planner import (
    PlannerSolution,
    Regime,
    ThresholdResult,
    brute_force_oracle,
    regime_boundary_scan,
    solve_optimal_tax,
    trust_threshold,
)
from .stats import SufficientStats, check_decomposition, expected_welfare, sufficient_stats

__version__ = "0.1.0"
