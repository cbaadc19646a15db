#!/usr/bin/env python3
"""Track the mixtures-have-state checks along c*cos^2 + (1-c)*cos^4.

At c = 1 the law is the quantum one and the response span is 3-dimensional
with no equal-mean witness. Any admixture of cos^4 should lift the span to
8 and open a witness gap of (1 - c)/4 on the polar axis.
"""
import argparse

import numpy as np

from passage_lab.mhs import mhs_check
from passage_lab.sphere import ProbabilityLaw


def mixed_law(c: float) -> ProbabilityLaw:
    return ProbabilityLaw.custom(
        lambda t: c * np.cos(t / 2) ** 2 + (1 - c) * np.cos(t / 2) ** 4, f"mix{c:g}"
    )


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=11)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print("c,affine_dimension,holds,witness_gap,expected_gap")
    for c in np.linspace(0.0, 1.0, args.steps):
        verdict = mhs_check(mixed_law(float(c)), seed=args.seed)
        gap = verdict.witness.gap if verdict.witness else 0.0
        print(f"{c:.3f},{verdict.affine_dimension},{str(verdict.holds_at_quantum_dimension).lower()},"
              f"{gap:.12f},{(1 - c) / 4:.12f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
