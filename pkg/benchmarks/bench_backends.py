#!/usr/bin/env python3
"""Benchmark the compiled core against the pure-Python fallback, and the
Kronecker sampling path against dense sampling.

Run after installing the package:  python benchmarks/bench_backends.py
"""

import time

import numpy as np

from oufields import _corepy
from oufields._backend import backend_name, core
from oufields.grids import GridSpec, fraction_grid
from oufields.kernels import scaled_bridge_field, tied_down_bridge_field
from oufields.sampling import sample_dense, sample_kronecker


def timeit(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_pointwise(n=200_000):
    rng = np.random.default_rng(0)
    xs = rng.uniform(0.0, 0.999, size=(n, 2))
    for label, mod in (("compiled" if backend_name == "compiled" else "selected", core),
                       ("python", _corepy)):
        fn = mod.axis_scaled
        t = timeit(lambda: [fn(1.0, 0.3, a, b) for a, b in xs], repeat=2)
        print(f"  axis_scaled x{n:>7d}  {label:>8s}: {t*1e3:8.1f} ms  ({t/n*1e9:6.0f} ns/call)")


def bench_dense_assembly(n_side=40):
    pts = fraction_grid(n_side)
    args = (core.AX_BRIDGE, 0.0, 0.0, core.AX_BRIDGE, 0.0, 0.0, 1.0, pts, pts)
    for label, mod in (("compiled" if backend_name == "compiled" else "selected", core),
                       ("python", _corepy)):
        t = timeit(lambda m=mod: m.dense_separable(*args), repeat=2)
        print(f"  dense {n_side}x{n_side} grid      {label:>8s}: {t*1e3:8.1f} ms")
    same = np.array_equal(core.dense_separable(*args), _corepy.dense_separable(*args))
    print(f"  backends bit-identical: {same}")


def bench_sampling(n_side=40, n_replicates=1000, seed=123):
    grid = GridSpec(fraction_grid(n_side), fraction_grid(n_side))
    kernel = tied_down_bridge_field()
    t_dense = timeit(lambda: sample_dense(kernel, grid, seed, n_replicates), repeat=1)
    t_kron = timeit(
        lambda: sample_kronecker(kernel.s_axis, kernel.t_axis, kernel.scale, grid,
                                 seed, n_replicates),
        repeat=1,
    )
    print(f"  dense sampling     {n_side}x{n_side} x{n_replicates}: {t_dense:8.2f} s")
    print(f"  kronecker sampling {n_side}x{n_side} x{n_replicates}: {t_kron:8.2f} s")
    print(f"  speedup: {t_dense / t_kron:.1f}x")


def main():
    print(f"selected backend: {backend_name}")
    print("pointwise scaled-bridge axis kernel:")
    bench_pointwise()
    print("grid covariance assembly (tied-down bridge):")
    bench_dense_assembly()
    print("sampling paths (tied-down bridge):")
    bench_sampling()
    print("sampling paths (scaled bridge, S=2, T=3, alpha=0.3, beta=2):")
    k = scaled_bridge_field(2.0, 3.0, 0.3, 2.0)
    grid = GridSpec(fraction_grid(40, 2.0), fraction_grid(40, 3.0))
    t_dense = timeit(lambda: sample_dense(k, grid, 5, 200), repeat=1)
    t_kron = timeit(lambda: sample_kronecker(k.s_axis, k.t_axis, k.scale, grid, 5, 200),
                    repeat=1)
    print(f"  dense {t_dense:.2f} s vs kronecker {t_kron:.2f} s: {t_dense/t_kron:.1f}x")


if __name__ == "__main__":
    main()
