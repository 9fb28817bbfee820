"""Compare the numba kernels with the numpy fallback on H++ workloads.

    python benchmarks/bench_kernels.py [--sizes 10 14 20] [--repeat 3]
"""

import argparse
import time

import numpy as np

from lhomkit import kernels
from lhomkit._accel import HAVE_NUMBA
from lhomkit.digraph import random_digraph
from lhomkit.pairs import PairGraph
from lhomkit.triples import TripleGraph


def best_of(func, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        func()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[10, 14, 20])
    parser.add_argument("--density", type=float, default=0.4)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    if not HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(args.seed)
    print(f"{'n':>4} {'kernel':<10} {'numba [s]':>11} {'numpy [s]':>11} {'speedup':>8}")
    for n in args.sizes:
        H = random_digraph(n, args.density, rng)
        adj = np.ascontiguousarray(H.adj)
        target = TripleGraph(H, PairGraph(H)).any_target
        start = int(rng.integers(n**3))
        cases = {
            "closure": (lambda: kernels._closure_numba(adj, target), lambda: kernels._closure_numpy(adj, target)),
            "bfs": (lambda: kernels._bfs_numba(adj, start), lambda: kernels._bfs_numpy(adj, start)),
        }
        for name, (fast, slow) in cases.items():
            fast()  # compile / warm the cache
            a = best_of(fast, args.repeat)
            b = best_of(slow, args.repeat)
            print(f"{n:>4} {name:<10} {a:>11.4f} {b:>11.4f} {b / a:>7.1f}x")


if __name__ == "__main__":
    main()
