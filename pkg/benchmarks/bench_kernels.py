#!/usr/bin/env python3
"""Benchmark the compiled phase-sum kernel against the NumPy fallback.

Two tiers:

* microbenchmark - the raw kernel on (64 terms) x (m times) inputs, the
  shape produced by the 8-level eigendecompositions that dominate scans;
* end-to-end - a field scan with the dynamics layer forced onto each
  backend in turn.

Run:  python benchmarks/bench_kernels.py
"""

import time

import numpy as np

import rpsense.dynamics
from rpsense import kernels
from rpsense.dynamics import field_scan
from rpsense.spincore import RadicalPairParams


def timeit(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def microbenchmark():
    rng = np.random.default_rng(0)
    n = 64
    amps = rng.normal(size=n) + 1j * rng.normal(size=n)
    freqs = rng.uniform(-3, 3, size=n)
    print(f"phase-sum kernel, {n} terms (built: {kernels.BACKEND})")
    print(f"{'m':>9}  {'numpy':>12}  {'cython':>12}  {'speedup':>8}")
    for m in (10_000, 100_000, 1_000_000):
        times = np.linspace(0.0, 2600.0, m)
        t_np = timeit(lambda: kernels.phase_series_numpy(amps, freqs, times))
        if kernels.BACKEND == "cython":
            t_cy = timeit(lambda: kernels.phase_series_cython(amps, freqs, times))
            print(f"{m:>9}  {t_np * 1e3:>10.2f}ms  {t_cy * 1e3:>10.2f}ms  {t_np / t_cy:>7.2f}x")
        else:
            print(f"{m:>9}  {t_np * 1e3:>10.2f}ms  {'n/a':>12}  {'n/a':>8}")


def end_to_end():
    p = RadicalPairParams(h_a=1.0, omega=0.0, g=0.1, kappa=0.01)
    omegas = np.linspace(0.0, 2.0, 40)
    results = {}
    backends = [("numpy", kernels.phase_series_numpy)]
    if kernels.BACKEND == "cython":
        backends.append(("cython", kernels.phase_series_cython))
    original = rpsense.dynamics.phase_series
    print("\nfield scan, 40 field points (3 recombination integrals each)")
    try:
        for name, impl in backends:
            rpsense.dynamics.phase_series = impl
            start = time.perf_counter()
            scan = field_scan(p, omegas)
            elapsed = time.perf_counter() - start
            results[name] = (elapsed, scan)
            print(f"  {name:>7}: {elapsed:.2f} s")
    finally:
        rpsense.dynamics.phase_series = original
    if len(results) == 2:
        a, b = results["numpy"][1], results["cython"][1]
        dev = max(np.abs(a.singlet_fraction - b.singlet_fraction).max(),
                  np.abs(a.contrast_yield - b.contrast_yield).max())
        print(f"  backend agreement: max deviation {dev:.3e}")
        print(f"  speedup: {results['numpy'][0] / results['cython'][0]:.2f}x")


if __name__ == "__main__":
    microbenchmark()
    end_to_end()
