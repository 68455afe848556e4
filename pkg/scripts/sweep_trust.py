"""Sweep trust for an isoelastic economy and compare the solver with the closed form.

    python3 scripts/sweep_trust.py --y-star 2 --step 0.05 > sweep.csv
"""

import argparse
import csv
import sys

import numpy as np

from trustramsey import iso_economy, iso_solution, solve_optimal_tax


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--y-star", type=float, default=2.0)
    ap.add_argument("--step", type=float, default=0.05)
    args = ap.parse_args()

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["theta", "regime", "tau_star", "g_star", "tau_closed", "abs_err"])
    for theta in np.arange(args.step, 1.0, args.step):
        theta = round(float(theta), 12)
        sol = solve_optimal_tax(iso_economy(args.y_star, theta))
        closed = iso_solution(args.y_star, theta).tau_star
        out.writerow([theta, sol.regime.value, f"{sol.tau_star:.12g}", f"{sol.g_star:.12g}",
                      f"{closed:.12g}", f"{abs(sol.tau_star - closed):.3e}"])


if __name__ == "__main__":
    main()
