"""Compare the compiled and pure-Python RK4 kernels on a ZLB episode.

    python3 benchmarks/bench_kernels.py [--steps N] [--repeat R]
"""

import argparse
import math
import timeit

import numpy as np

from wunklab import P0
from wunklab._backend import BACKENDS
from wunklab.analysis import steady_state
from wunklab.dynamics import Regime, scenario_field


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    coeffs = np.ascontiguousarray(scenario_field(P0, Regime.ZLB).coeffs(), dtype=float)
    z = steady_state(P0, Regime.NORMAL)
    h = 1e-3
    results = {}
    for name, mod in sorted(BACKENDS.items()):
        run = lambda: mod.rk4_path(coeffs, z.x, z.pi, h, args.steps, -1.0, math.nan)
        xs, ps, _ = run()
        best = min(timeit.repeat(run, number=1, repeat=args.repeat))
        results[name] = (best, xs, ps)
        print(f"{name:>7}: {best * 1e3:9.2f} ms for {args.steps} steps ({best / args.steps * 1e9:7.1f} ns/step)")
    if {"python", "cython"} <= results.keys():
        tp, xp, pp = results["python"]
        tc, xc, pc = results["cython"]
        same = np.array_equal(xp, xc) and np.array_equal(pp, pc)
        print(f"speedup: {tp / tc:.1f}x, paths bit-identical: {same}")
    else:
        print("compiled kernel not built; only the fallback was timed")


if __name__ == "__main__":
    main()
