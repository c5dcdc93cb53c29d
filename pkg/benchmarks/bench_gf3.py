"""Benchmark the GF(3) elimination backends (compiled core vs numpy).

Runs the two hot kernels on synthetic matrices shaped like the engine's
real workload (tall thin sparse differentials) and on the square dense
case that dominates at high degree caps, then on the real differential
matrices of the default engine.

Usage: python benchmarks/bench_gf3.py [--max-side 1200]
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

sys.path.insert(0, "src")

from cotor.gf3 import backends  # noqa: E402


def random_matrix(rng, rows, cols, density):
    a = np.zeros((rows, cols), dtype=np.uint8)
    nnz = int(rows * cols * density)
    r = rng.integers(0, rows, size=nnz)
    c = rng.integers(0, cols, size=nnz)
    a[r, c] = rng.integers(1, 3, size=nnz)
    return a


def bench(fn, *args, repeats=3):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--max-side", type=int, default=1200)
    parser.add_argument("--engine-degree", type=int, default=60)
    args = parser.parse_args()

    rng = np.random.default_rng(7)
    mods = backends()
    print(f"backends available: {', '.join(mods)}")

    cases = [
        ("tall sparse 1%", random_matrix(rng, args.max_side,
                                         args.max_side // 2, 0.01)),
        ("square sparse 2%", random_matrix(rng, args.max_side,
                                           args.max_side, 0.02)),
        ("square dense 30%", random_matrix(rng, args.max_side // 2,
                                           args.max_side // 2, 0.30)),
    ]

    for label, a in cases:
        print(f"\n{label}  ({a.shape[0]}x{a.shape[1]})")
        reference = None
        for name, mod in mods.items():
            t, (r, rank, piv) = bench(mod.rref, a)
            if reference is None:
                reference = (rank, r.tobytes())
            else:
                assert reference == (rank, r.tobytes()), \
                    f"backend {name} disagrees on rref"
            print(f"  rref        {name:7s} {t * 1e3:9.2f} ms  rank={rank}")
        reference = None
        for name, mod in mods.items():
            t, piv = bench(mod.col_profile, a)
            if reference is None:
                reference = piv
            else:
                assert reference == piv, \
                    f"backend {name} disagrees on col_profile"
            print(f"  col_profile {name:7s} {t * 1e3:9.2f} ms  "
                  f"pivots={len(piv)}")

    from cotor.engine import Engine

    engine = Engine(convention="parity")
    n = args.engine_degree
    a = engine.d_dense(n)
    print(f"\nreal differential at degree {n}  ({a.shape[0]}x{a.shape[1]}, "
          f"nnz={int((a != 0).sum())})")
    for name, mod in mods.items():
        t, _ = bench(mod.rref, a)
        print(f"  rref        {name:7s} {t * 1e3:9.2f} ms")
    for name, mod in mods.items():
        t, _ = bench(mod.col_profile, a)
        print(f"  col_profile {name:7s} {t * 1e3:9.2f} ms")


if __name__ == "__main__":
    main()
