#!/usr/bin/env python3
"""Timing comparison of the compiled kernels against the numpy fallback.

Run from the repository root after installing the package:

    python3 benchmarks/bench_kernels.py

Covers the two hot loops behind the Monte Carlo harness: the channel response
over a position grid (per-path complex exponentials) and the pairwise power
expansion (O(L^2) per position).
"""

import time

import numpy as np

from mapos import _kernels_py

try:
    from mapos import _kernels_cy
except ImportError:
    _kernels_cy = None


def make_inputs(num_paths, num_positions, seed=0):
    rng = np.random.default_rng(seed)
    gains = (rng.standard_normal(num_paths) + 1j * rng.standard_normal(num_paths)) / np.sqrt(
        num_paths
    )
    dir_x = rng.uniform(-1, 1, num_paths)
    dir_y = rng.uniform(-1, 1, num_paths)
    xs = rng.uniform(-2, 2, num_positions)
    ys = rng.uniform(-2, 2, num_positions)
    return gains, dir_x, dir_y, xs, ys


def best_of(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    wavenumber = 2 * np.pi
    print(f"{'kernel':<12} {'L':>4} {'positions':>9} {'numpy':>10} {'cython':>10} {'speedup':>8}")
    cases = [(30, 6561), (100, 6561), (30, 100_000)]
    for num_paths, num_positions in cases:
        gains, dir_x, dir_y, xs, ys = make_inputs(num_paths, num_positions)
        t_py = best_of(lambda: _kernels_py.response_at(gains, dir_x, dir_y, wavenumber, xs, ys))
        if _kernels_cy is not None:
            t_cy = best_of(
                lambda: _kernels_cy.response_at(gains, dir_x, dir_y, wavenumber, xs, ys)
            )
            ratio = f"{t_py / t_cy:7.1f}x"
            cy_col = f"{t_cy * 1e3:8.2f}ms"
        else:
            ratio, cy_col = "    n/a", "   missing"
        print(
            f"{'response_at':<12} {num_paths:>4} {num_positions:>9} "
            f"{t_py * 1e3:8.2f}ms {cy_col} {ratio}"
        )

    cases = [(30, 1000), (100, 1000), (30, 6561)]
    for num_paths, num_positions in cases:
        gains, dir_x, dir_y, xs, ys = make_inputs(num_paths, num_positions)
        mags, phases = np.abs(gains), np.angle(gains)
        t_py = best_of(
            lambda: _kernels_py.power_at(mags, phases, dir_x, dir_y, wavenumber, xs, ys),
            repeats=3,
        )
        if _kernels_cy is not None:
            t_cy = best_of(
                lambda: _kernels_cy.power_at(mags, phases, dir_x, dir_y, wavenumber, xs, ys),
                repeats=3,
            )
            ratio = f"{t_py / t_cy:7.1f}x"
            cy_col = f"{t_cy * 1e3:8.2f}ms"
        else:
            ratio, cy_col = "    n/a", "   missing"
        print(
            f"{'power_at':<12} {num_paths:>4} {num_positions:>9} "
            f"{t_py * 1e3:8.2f}ms {cy_col} {ratio}"
        )


if __name__ == "__main__":
    main()
