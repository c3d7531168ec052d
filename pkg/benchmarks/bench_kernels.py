#!/usr/bin/env python
"""Benchmark the compiled estimation kernel against the numpy fallback.

Times the Q/U assembly contraction on sweep-shaped problems (full
tomography at d = 3, 4, 5) and on a Fock-truncation-shaped problem
(d = 61, 5 parameters), then an end-to-end random-state sweep with each
backend forced.

Usage: python benchmarks/bench_kernels.py [--samples N]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from qincompat import _kernels_py, kernels, sampler

try:
    from qincompat import _kernels_c
except ImportError:
    _kernels_c = None


def make_problem(p: int, d: int, seed: int):
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(p, d, d)) + 1j * rng.normal(size=(p, d, d))
    g = np.ascontiguousarray(0.5 * (g + np.conj(np.swapaxes(g, 1, 2))))
    x = rng.uniform(0.01, 1.0, size=d)
    return g, x


def time_call(fn, *args, reps: int) -> float:
    fn(*args)  # warm up
    start = time.perf_counter()
    for _ in range(reps):
        fn(*args)
    return (time.perf_counter() - start) / reps


def bench_assemble() -> None:
    print(f"{'shape':>16} {'reps':>6} {'python':>12} {'compiled':>12} {'speedup':>8}")
    for p, d, reps in ((8, 3, 20000), (15, 4, 10000), (24, 5, 5000), (5, 61, 2000)):
        g, x = make_problem(p, d, seed=p * d)
        t_py = time_call(_kernels_py.assemble_qu, g, x, 0.0, reps=reps)
        if _kernels_c is None:
            print(f"{f'p={p} d={d}':>16} {reps:>6} {t_py * 1e6:>10.1f}us {'n/a':>12} {'n/a':>8}")
            continue
        t_c = time_call(_kernels_c.assemble_qu, g, x, 0.0, reps=reps)
        print(f"{f'p={p} d={d}':>16} {reps:>6} {t_py * 1e6:>10.1f}us "
              f"{t_c * 1e6:>10.1f}us {t_py / t_c:>7.1f}x")


def bench_sweep(n_samples: int) -> None:
    print(f"\nend-to-end sweep (d=4, n={n_samples}, seed=0):")
    backends = ["python"] + (["compiled"] if kernels.HAVE_COMPILED else [])
    times = {}
    for backend in backends:
        kernels.set_backend(backend)
        start = time.perf_counter()
        records = sampler.sweep(4, n_samples, seed=0)
        times[backend] = time.perf_counter() - start
        print(f"  {backend:>8}: {times[backend]:.3f}s "
              f"({1e3 * times[backend] / len(records):.3f} ms/sample)")
    if len(times) == 2:
        print(f"  speedup: {times['python'] / times['compiled']:.2f}x")
    kernels.set_backend("compiled" if kernels.HAVE_COMPILED else "python")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=1000,
                        help="sweep samples for the end-to-end comparison")
    args = parser.parse_args()
    print(f"active backend: {kernels.backend_name()} "
          f"(compiled available: {kernels.HAVE_COMPILED})\n")
    bench_assemble()
    bench_sweep(args.samples)


if __name__ == "__main__":
    main()
