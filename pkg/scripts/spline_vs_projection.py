#!/usr/bin/env python3
"""Best-L2 spline mesh-refinement study and the k=1 vs. Haar comparison.

Runs mesh-halving studies for spline orders 1-3 on a smooth target,
printing the fitted rates, then verifies that the order-1 spline
approximation coincides with the Haar dyadic projection when the mesh
matches the dyadic cells.

Usage: python3 scripts/spline_vs_projection.py [--outdir DIR]
"""

import argparse
import math
import os

import numpy as np

from waverate import DyadicGrid, make_family
from waverate.convergence import MarkedPoint, TestFunction, builtin_suite, export_rate_json
from waverate.expansion import project
from waverate.splines import best_l2_spline, make_space, spline_convergence_study


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", help="write RateReport JSON here")
    args = parser.parse_args()

    sine = TestFunction(
        "sine",
        np.sin,
        (0.0, 3.25),
        (MarkedPoint(1.0, "continuity", math.sin(1.0)),),
        math.inf,
    )
    meshes = [2.0**-m for m in range(2, 7)]
    print(f"{'order':<6} {'slope':>7} {'R^2':>7} {'finest error':>13}")
    for order in (1, 2, 3):
        report = spline_convergence_study(sine, order, meshes)
        print(
            f"k={order:<4} {report.slope:>7.3f} {report.r_squared:>7.4f} "
            f"{report.sup_errors[-1]:>13.3e}"
        )
        if args.outdir:
            export_rate_json(report, os.path.join(args.outdir, f"spline_k{order}.json"))

    gaussian = {tf.name: tf for tf in builtin_suite()}["gaussian"]
    haar = make_family("haar")
    f = gaussian.tabulate(13)
    xs = DyadicGrid(-2.0, 2.0, 13)
    print("\nk=1 spline vs. Haar projection (shared window [-2, 2]):")
    for j in (2, 3, 4):
        pj = project(f, haar, j, xs)
        approx = best_l2_spline(f, make_space(1, 2.0**-j, gaussian.window))
        gap = float(np.max(np.abs(approx(xs.points()) - pj.values)))
        print(f"  h = 2^-{j}: sup difference {gap:.3e}")


if __name__ == "__main__":
    main()
