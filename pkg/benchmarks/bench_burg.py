"""Burg recursion kernels: compiled extension vs numpy fallback.

Usage:
    python benchmarks/bench_burg.py
"""
import timeit

import numpy as np

from mesa._kernels import KERNEL, burg_recursion, burg_recursion_py

REPEATS = 5
CASES = [
    (4_096, 256),
    (4_096, 1024),
    (30_000, 1024),
    (30_000, 5450),
]


def median_time(fn, number=1):
    times = []
    for _ in range(REPEATS):
        times.append(timeit.timeit(fn, number=number) / number)
    return float(np.median(times))


def main():
    if KERNEL != "compiled":
        print("compiled kernel not available; nothing to compare")
        return
    rng = np.random.default_rng(0)
    print(f"{'n':>8} {'order':>6} {'compiled (ms)':>14} {'numpy (ms)':>12} {'speedup':>8}")
    print("-" * 54)
    for n, order in CASES:
        x = rng.standard_normal(n)
        p_c, c_c = burg_recursion(x, order)
        p_p, c_p = burg_recursion_py(x, order)
        assert np.allclose(p_c, p_p, rtol=1e-10)
        assert np.allclose(c_c, c_p, rtol=1e-8, atol=1e-12)
        t_c = median_time(lambda: burg_recursion(x, order))
        t_p = median_time(lambda: burg_recursion_py(x, order))
        print(f"{n:>8} {order:>6} {t_c * 1e3:>14.2f} {t_p * 1e3:>12.2f} {t_p / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
