"""Benchmark the compiled CSR spmm kernel against the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--sizes 256,1024,4096]
                                           [--density 0.01] [--width 64]
                                           [--repeats 5]
"""

import argparse
import time

import numpy as np

from egognn import kernel_impl
from egognn._kernels_py import spmm_csr as spmm_fallback
from egognn.kernels import spmm_csr as spmm_active
from egognn.sbm import generate_er


def bench(fn, a, b, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(a.row_offsets, a.col_indices, a.values, b)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="256,1024,4096")
    ap.add_argument("--density", type=float, default=0.01)
    ap.add_argument("--width", type=int, default=64)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    print(f"active kernel: {kernel_impl}")
    print(f"{'n':>6} {'nnz':>9} {'active_ms':>10} {'fallback_ms':>12} {'speedup':>8}")
    rng = np.random.default_rng(0)
    for n in (int(s) for s in args.sizes.split(",")):
        g = generate_er(n, args.density, seed=n)
        a = g.adjacency
        b = np.ascontiguousarray(rng.random((n, args.width)))
        t_active, out_a = bench(spmm_active, a, b, args.repeats)
        t_fallback, out_f = bench(spmm_fallback, a, b, args.repeats)
        assert np.allclose(out_a, out_f, atol=1e-12)
        print(f"{n:>6} {a.nnz:>9} {t_active * 1e3:>10.2f} "
              f"{t_fallback * 1e3:>12.2f} {t_fallback / t_active:>8.2f}x")


if __name__ == "__main__":
    main()
