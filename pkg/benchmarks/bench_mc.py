"""Benchmark the compiled Monte Carlo kernel against the numpy fallback.

Run with:  python benchmarks/bench_mc.py [--paths N] [--steps-per-year K]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from fitval._kernels import (
    MODE_CLIPPED,
    profit_pv_numpy,
)

try:
    from fitval._pathkernel import profit_pv as profit_pv_cython
except ImportError:
    profit_pv_cython = None


def run(fn, z, args, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(z, *args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--paths", type=int, default=50_000)
    parser.add_argument("--steps-per-year", type=int, default=52)
    parser.add_argument("--years", type=float, default=15.0)
    parser.add_argument("--seed", type=int, default=0)
    ns = parser.parse_args()

    n_steps = round(ns.steps_per_year * ns.years)
    rng = np.random.default_rng(ns.seed)
    z = rng.standard_normal((ns.paths, n_steps))
    dt = ns.years / n_steps
    # Collar base case: P0=30, floor 25, cap ~57, discounted perpetuity tail.
    kernel_args = (30.0, 0.0, 0.19, dt, 0.05, 5256.0,
                   MODE_CLIPPED, 25.0, 300_000.0 / 5256.0, 0.0,
                   5256.0 / 0.05 * np.exp(-0.05 * ns.years))

    t_np, out_np = run(profit_pv_numpy, z, kernel_args)
    print(f"paths={ns.paths}  steps={n_steps}")
    print(f"numpy  : {t_np * 1e3:8.1f} ms   mean={out_np.mean():.2f}")
    if profit_pv_cython is None:
        print("cython : not built (pip install -e . with Cython available)")
        return
    t_cy, out_cy = run(profit_pv_cython, z, kernel_args)
    print(f"cython : {t_cy * 1e3:8.1f} ms   mean={out_cy.mean():.2f}")
    print(f"speedup: {t_np / t_cy:.2f}x")
    max_diff = np.max(np.abs(out_np - out_cy))
    rel = max_diff / np.max(np.abs(out_np))
    print(f"max |numpy - cython| = {max_diff:.3e}  (relative {rel:.3e})")


if __name__ == "__main__":
    main()
