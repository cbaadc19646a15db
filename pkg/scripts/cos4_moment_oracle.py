#!/usr/bin/env python3
"""Predict the affine span dimension of cos^4(theta/2) responses from moments.

cos^4(d/2) = ((1 + n.v)/2)^2, so an ensemble's response to direction n is

    (1 + 2 n.m + n^T S n) / 4

with m the mean Bloch vector and S the second-moment matrix (trace 1 for
pure members). The response therefore factors through (m, traceless part
of S): 3 + 5 = 8 numbers. This script samples ensembles the same way the
lab does and reports the rank of that feature set, without ever evaluating
the law itself.
"""
import argparse

import numpy as np


def sample_unit_vectors(rng, n):
    z = rng.uniform(-1.0, 1.0, n)
    phi = rng.uniform(-np.pi, np.pi, n)
    r = np.sqrt(1.0 - z**2)
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def moment_features(rng, n_ensembles):
    rows = []
    for _ in range(n_ensembles):
        k = rng.integers(1, 7)
        v = sample_unit_vectors(rng, k)
        w = rng.dirichlet(np.ones(k))
        m = w @ v
        s = (v.T * w) @ v
        s0 = s - np.trace(s) / 3.0 * np.eye(3)
        iu = np.triu_indices(3)
        rows.append(np.concatenate([m, s0[iu]]))
    return np.array(rows)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--ensembles", type=int, default=50)
    parser.add_argument("--seeds", type=int, default=20)
    parser.add_argument("--tol", type=float, default=1e-6)
    args = parser.parse_args()

    ranks = []
    for seed in range(args.seeds):
        feats = moment_features(np.random.default_rng(seed), args.ensembles)
        feats = feats - feats.mean(axis=0)
        sv = np.linalg.svd(feats, compute_uv=False)
        ranks.append(int(np.sum(sv > args.tol * sv[0])))
    print(f"moment-feature affine rank per seed: {ranks}")
    print(f"predicted cos^4 span dimension: {max(set(ranks), key=ranks.count)}")


if __name__ == "__main__":
    main()
