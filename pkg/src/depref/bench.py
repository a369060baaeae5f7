"""Benchmark the compiled kernels against the pure-Python fallback.

Run as `python -m depref.bench [--n N] [--quick]`.  Both backends consume
the random stream identically, so besides timing, the harness asserts the
outputs match bit for bit.
"""
import argparse
import time

import numpy as np

from ._backend import available_backends, load_backend
from .core import snapshot_grid
from .runner import replica_rng


def _time(fn, repeats=3):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _cases(n):
    grid = snapshot_grid(n)
    yield ("linear growth  (bucketed)", "grow_graph",
           lambda k, rng: k.grow_graph(0, 1.0, 1.0, 0.0, 1, n, rng, grid, [1], n, 0), n)
    yield ("inverse growth (bucketed)", "grow_graph",
           lambda k, rng: k.grow_graph(1, 0.0, 1.0, 0.0, 1, n, rng, grid, [1], n, 0), n)
    yield ("inverse growth (rejection)", "grow_graph",
           lambda k, rng: k.grow_graph(1, 0.0, 1.0, 0.0, 1, n, rng, grid, [1], n, 1), n)
    yield ("inverse growth m=3", "grow_graph",
           lambda k, rng: k.grow_graph(1, 0.0, 0.7, 0.5, 3, n, rng, grid, [1], n, 0), 3 * n)
    yield ("birth process", "birth_jump_times",
           lambda k, rng: k.birth_jump_times(1.0, 0.0, 1, n, float("inf"), rng), n)
    yield ("branching tree", "cmj_grow_core",
           lambda k, rng: k.cmj_grow_core(1.0, 0.0, n, rng), n)
    yield ("birth ensemble m=2", "ak_grow_core",
           lambda k, rng: k.ak_grow_core(1.0, 0.0, 2, n, rng, grid, [0]), 2 * n)


def _equal(a, b):
    if isinstance(a, dict):
        return all(np.array_equal(a[k], b[k]) for k in a)
    return np.array_equal(a, b)


def main(argv=None):
    ap = argparse.ArgumentParser(description="depref backend benchmark")
    ap.add_argument("--n", type=int, default=100_000, help="events per case")
    ap.add_argument("--quick", action="store_true", help="single repeat")
    args = ap.parse_args(argv)

    backends = available_backends()
    if "cython" not in backends:
        print("compiled kernels not available; timing the fallback only")
    mods = {name: load_backend(name) for name in backends}
    repeats = 1 if args.quick else 3

    print(f"events per case: {args.n}")
    print(f"{'case':<28} " + " ".join(f"{b:>12}" for b in backends) +
          ("      speedup" if len(backends) == 2 else ""))
    for label, _, call, ops in _cases(args.n):
        times = {}
        outs = {}
        for name, mod in mods.items():
            times[name], outs[name] = _time(lambda m=mod: call(m, replica_rng(1, 0)), repeats)
        row = f"{label:<28} " + " ".join(
            f"{ops / times[b] / 1e6:>9.2f} M/s" for b in backends
        )
        if len(backends) == 2:
            row += f"   {times['python'] / times['cython']:>8.1f}x"
            if not _equal(outs["cython"], outs["python"]):
                row += "   OUTPUT MISMATCH"
        print(row)


if __name__ == "__main__":
    main()
