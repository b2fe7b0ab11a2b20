"""Fit a cyclic-shift-invariant model and compare it with unrestricted low-rank fits.

Data are noisy samples from a planted invariant subspace with ``k`` generators.
"""

import argparse

import numpy as np

from subspacefit import CyclicAction, DataSet, best_invariant, best_subspace, is_invariant
from subspacefit.fiber import random_fibered_model


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=4)
    ap.add_argument("--q", type=int, default=3)
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--points", type=int, default=20)
    ap.add_argument("--noise", type=float, default=0.05)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    action = CyclicAction(args.p, args.q)
    planted = random_fibered_model(action, args.k, rng).assemble()
    coef = rng.normal(size=(planted.dim, args.points)) + 1j * rng.normal(size=(planted.dim, args.points))
    clean = (planted.basis @ coef).T
    noise = args.noise * (rng.normal(size=clean.shape) + 1j * rng.normal(size=clean.shape))
    data = DataSet(clean + noise)

    model, report = best_invariant(data, action, args.k)
    w = model.assemble()
    print(f"invariant fit: cost {report.cost:.4g}, dim {w.dim}, invariant={is_invariant(w, action)}")
    for r in sorted({args.k, w.dim, args.k * args.p}):
        print(f"unrestricted rank {r:>2}: cost {best_subspace(data, r).cost:.4g}")
    gap = np.max(np.abs(w.projector.matrix - planted.projector.matrix))
    print(f"max-entry distance between fitted and planted projectors: {gap:.3g}")


if __name__ == "__main__":
    main()
