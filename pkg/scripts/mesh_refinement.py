#!/usr/bin/env python3
"""Eigenvalue convergence study for the discretized circle and Gaussian
interval: doubling the number of points should shrink the eigenvalue error
roughly fourfold (second-order accuracy of the conductance calibration).

Usage:
    python scripts/mesh_refinement.py [--levels 5] [--k 3]
"""

import argparse
import math
import sys

from mmkit import spectral
from mmkit.space import gen_cycle, gen_gauss_interval


def circle_errors(n, k):
    lam = spectral.eigenpairs(gen_cycle(n, 2 * math.pi), 2 * k).eigenvalues
    # continuum spectrum: j^2 with multiplicity two
    return [abs(lam[2 * j - 1] - j * j) for j in range(1, k + 1)]


def gauss_errors(n, k):
    lam = spectral.eigenpairs(gen_gauss_interval(n, 1.0, 5.0), k).eigenvalues
    # Ornstein-Uhlenbeck spectrum: 1, 2, 3, ...
    return [abs(lam[j] - j) for j in range(1, k + 1)]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--levels", type=int, default=5)
    ap.add_argument("--k", type=int, default=3, help="number of modes tracked")
    args = ap.parse_args(argv)

    for label, base, fn in (("circle", 32, circle_errors),
                            ("gauss-interval", 50, gauss_errors)):
        print(f"\n{label}: |lambda_j - j^2| resp. |lambda_j - j|")
        prev = None
        for lvl in range(args.levels):
            n = base * (2 ** lvl)
            errs = fn(n, args.k)
            rates = ""
            if prev is not None:
                rates = "  rate " + " ".join(
                    f"{math.log2(p / e):.2f}" if e > 0 else "inf"
                    for p, e in zip(prev, errs))
            print(f"  n={n:5d}  " + " ".join(f"{e:.3e}" for e in errs) + rates)
            prev = errs
    return 0


if __name__ == "__main__":
    sys.exit(main())
