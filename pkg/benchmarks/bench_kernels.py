"""Time the numba kernels against their pure-numpy twins.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.  Each kernel is
called once before timing so JIT compilation is excluded, and both backends
must agree to 1e-12 relative before a timing is printed.
"""

import argparse
import time

import numpy as np

from qht import kernels
from qht.mapping import ns_map, spectral_pair
from qht.states import random_density


def _best_of(fn, args, repeat):
    fn(*args)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def cases():
    rho = random_density(6, seed=1)
    sigma = random_density(6, seed=2)
    sp = spectral_pair(rho, sigma)
    grid = np.linspace(0.0, 1.0, 2001)
    yield "q_s_spectral d=6, 2001 s", "q_s_spectral", (sp.lam, sp.mu, sp.overlap, grid)
    # single-point calls dominate inside the golden-section search
    yield "q_s_spectral d=6, 1 s", "q_s_spectral", (sp.lam, sp.mu, sp.overlap, grid[700:701])

    pair = ns_map(random_density(4, seed=3), random_density(4, seed=4))
    pt = pair.p / pair.p.sum()
    qt = pair.q / pair.q.sum()
    yield "exponent_values 16 outcomes, 2001 s", "exponent_values", (pt, qt, 0.1, grid[:-1])
    yield "exponent_values 16 outcomes, 1 s", "exponent_values", (pt, qt, 0.1, grid[700:701])

    q2 = ns_map(random_density(2, seed=5), random_density(2, seed=6))
    yield "type_class_min_sum k=4, n=40", "type_class_min_sum", (q2.p, q2.q, 0.5, 0.5, 40)
    q3 = ns_map(random_density(3, seed=7), random_density(3, seed=8))
    yield "type_class_min_sum k=9, n=10", "type_class_min_sum", (q3.p, q3.q, 0.5, 0.5, 10)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args()
    if not kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    print(f"{'kernel':40s} {'numpy [us]':>12s} {'numba [us]':>12s} {'speedup':>8s}")
    for label, name, fargs in cases():
        f_np = getattr(kernels, name + "_np")
        f_nb = getattr(kernels, name + "_nb")
        a = np.asarray(f_np(*fargs), dtype=float)
        b = np.asarray(f_nb(*fargs), dtype=float)
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=0.0)
        t_np = _best_of(f_np, fargs, args.repeat)
        t_nb = _best_of(f_nb, fargs, args.repeat)
        print(f"{label:40s} {1e6 * t_np:12.1f} {1e6 * t_nb:12.1f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
