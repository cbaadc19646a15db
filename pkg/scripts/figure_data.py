#!/usr/bin/env python3
"""Write the data behind the standard plots into one directory.

Produces the CS contour grid, the square-to-sphere table, a comparison of
the QM law against the semicircle height, and a per-point Monte Carlo
check of CS along the square's main diagonal. Everything is seeded, so
reruns give identical files.
"""
import argparse
import csv
import math
from pathlib import Path

import numpy as np

from passage_lab import cli
from passage_lab.selection import UnitSquarePoint, cs_probability, simulate_correlated_selection
from passage_lab.sphere import semicircle_height


def law_table(path: Path, n: int) -> None:
    with path.open("w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["theta_deg", "qm", "cos4", "semicircle"])
        for theta in np.linspace(0.0, math.pi, n):
            out.writerow([
                repr(math.degrees(theta)),
                repr(math.cos(theta / 2) ** 2),
                repr(math.cos(theta / 2) ** 4),
                repr(semicircle_height(theta)),
            ])


def diagonal_monte_carlo(path: Path, n: int, trials: int, seed: int) -> None:
    with path.open("w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["p", "cs", "frequency", "standard_error", "z"])
        for k, p in enumerate(np.linspace(0.05, 0.95, n)):
            point = UnitSquarePoint(p, p)
            est = simulate_correlated_selection(point, trials, seed=seed + k)
            cs = cs_probability(point)
            z = (est.frequency_heads - cs) / est.standard_error if est.standard_error else 0.0
            out.writerow([repr(float(p)), repr(cs), repr(est.frequency_heads),
                          repr(est.standard_error), repr(z)])


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("outdir", type=Path)
    ap.add_argument("--resolution", type=int, default=101)
    ap.add_argument("--trials", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)

    res = str(args.resolution)
    for argv in (
        ["contour", "--resolution", res, "-o", str(args.outdir / "cs_contour.csv")],
        ["sphere-map", "--resolution", res, "-o", str(args.outdir / "sphere_map.csv")],
    ):
        code = cli.run(argv)
        if code:
            return code
    law_table(args.outdir / "laws.csv", 181)
    diagonal_monte_carlo(args.outdir / "diagonal_mc.csv", 19, args.trials, args.seed)
    print(f"wrote figure data to {args.outdir}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
