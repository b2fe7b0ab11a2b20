"""Compare K-subspaces against the exact partition search on random instances.

    python scripts/kss_vs_exhaustive.py --instances 30 --points 9 --count 3
"""

import argparse
import time

import numpy as np

from subspacefit import DataSet, SolverConfig, exhaustive_union, k_subspaces


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=30)
    ap.add_argument("--points", type=int, default=9)
    ap.add_argument("--dim", type=int, default=3)
    ap.add_argument("--count", type=int, default=2)
    ap.add_argument("--rank", type=int, default=1)
    ap.add_argument("--restarts", type=int, nargs="+", default=[1, 5, 20])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    instances = [
        DataSet(rng.normal(size=(args.points, args.dim)) + 1j * rng.normal(size=(args.points, args.dim)))
        for _ in range(args.instances)
    ]
    t0 = time.perf_counter()
    optimum = [exhaustive_union(d, args.count, args.rank).cost for d in instances]
    print(f"exhaustive: {time.perf_counter() - t0:.2f}s for {args.instances} instances")
    print(f"{'restarts':>8} {'hit rate':>9} {'mean gap':>10} {'max gap':>10} {'time':>7}")
    for restarts in args.restarts:
        t0 = time.perf_counter()
        gaps = np.array([
            k_subspaces(d, args.count, args.rank, SolverConfig(restarts=restarts, seed=i)).cost - opt
            for i, (d, opt) in enumerate(zip(instances, optimum))
        ])
        hit = np.mean(gaps <= 1e-8)
        print(f"{restarts:>8} {hit:>9.2f} {gaps.mean():>10.3g} {gaps.max():>10.3g} {time.perf_counter() - t0:>6.2f}s")


if __name__ == "__main__":
    main()
