"""Trust threshold over a grid of public-good weight g and productivity A (labour-tax mode).

Cells above 1 mean no trust level justifies a positive tax.
"""

import argparse

import numpy as np

from trustramsey import Economy, ProductionSpec, UtilitySpec, trust_threshold


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, default=0.5)
    ap.add_argument("--eta", type=float, default=1.0)
    ap.add_argument("--points", type=int, default=6)
    args = ap.parse_args()

    gs = np.linspace(0.5, 4.0, args.points)
    As = np.linspace(0.5, 3.0, args.points)
    print("g \\ A  " + " ".join(f"{a:>7.2f}" for a in As))
    for g in gs:
        cells = []
        for A in As:
            econ = Economy(utility=UtilitySpec(eta=args.eta, g=float(g)),
                           production=ProductionSpec(A=float(A), alpha=args.alpha))
            cells.append(f"{trust_threshold(econ).theta_bar:7.3f}")
        print(f"{g:6.2f} " + " ".join(cells))


if __name__ == "__main__":
    main()
