"""Compare the compiled and numpy implementations of the batched log-kernel sum.

    python3 benchmarks/bench_core.py [--repeat 5] [--census]
"""

import argparse
import time

import numpy as np

from dumbbell_energy import _backend
from dumbbell_energy.coulson import CoulsonObjective
from dumbbell_energy.graphs import DumbbellParams
from dumbbell_energy.search import SearchConfig, grid_refine_search

TRIPLES = [(3, 3, 1), (8, 7, 6), (17, 17, 17)]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--points", type=int, default=441)
    ap.add_argument("--census", action="store_true", help="also time full searches on a triple subset")
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    ab = rng.uniform(-1, 1, (args.points, 2))
    print(f"backends available: {', '.join(_backend.AVAILABLE)}")
    print(f"{'triple':>12} {'backend':>8} {'sec/batch':>10} {'us/point':>9} {'max |diff|':>11}")
    for triple in TRIPLES:
        p = DumbbellParams(*triple)
        ref = None
        for name in _backend.AVAILABLE:
            obj = CoulsonObjective(p, backend=name)
            vals = obj(ab[:, 0], ab[:, 1])
            ref = vals if ref is None else ref
            sec = best_of(lambda: obj(ab[:, 0], ab[:, 1]), args.repeat)
            diff = float(np.max(np.abs(vals - ref)))
            print(f"{str(triple):>12} {name:>8} {sec:10.4f} {1e6 * sec / args.points:9.1f} {diff:11.1e}")

    if args.census:
        subset = [DumbbellParams(r, s, ell) for r in (3, 5, 7) for s in (3, 5, 7) for ell in (1, 3, 5)]
        for name in _backend.AVAILABLE:
            t0 = time.perf_counter()
            for p in subset:
                grid_refine_search(p, SearchConfig(), energy_fn=CoulsonObjective(p, backend=name))
            print(f"search on {len(subset)} triples with {name}: {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
