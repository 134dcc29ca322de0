"""Compare the numba and numpy backends of the volume kernels.

    python3 benchmarks/bench_kernels.py [--samples N] [--grid N] [--repeat R]

Each kernel is warmed up once (this triggers JIT compilation) and then timed
``repeat`` times; the best wall time is reported.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from gaussgeo import kernels
from gaussgeo.volumes import montecarlo_volumes


def best_time(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--samples", type=int, default=2_000_000)
    p.add_argument("--grid", type=int, default=150)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--mu-sigma", type=float, default=0.5)
    args = p.parse_args(argv)

    u = np.random.default_rng(0).random((3, args.samples))
    cases = {
        f"mc_moments     n={args.samples:,}": lambda b: kernels.mc_moments(*u, 0.0, 1.0, args.mu_sigma, backend=b),
        f"montecarlo     n={args.samples:,}": lambda b: montecarlo_volumes(args.mu_sigma, args.samples, 0, backend=b).volumes,
        f"riemann        n={args.grid}^3": lambda b: kernels.riemann_volumes(args.mu_sigma, args.grid, backend=b),
    }
    print(f"{'kernel':34s} {'numba [s]':>10s} {'numpy [s]':>10s} {'speedup':>8s} {'max rel diff':>13s}")
    for name, fn in cases.items():
        t_nb, r_nb = best_time(lambda: fn("numba"), args.repeat)
        t_np, r_np = best_time(lambda: fn("numpy"), args.repeat)
        diff = np.max(np.abs(np.asarray(r_nb) - r_np) / np.maximum(np.abs(r_np), 1e-300))
        print(f"{name:34s} {t_nb:10.4f} {t_np:10.4f} {t_np / t_nb:8.2f} {diff:13.2e}")


if __name__ == "__main__":
    main()
