"""Benchmark the compiled kernels against the pure-NumPy fallback.

Times the three hot paths on oracle-sized workloads: batch feasibility
penalties (the audit), row norms, and the barrier solver itself.  Run with

    python3 benchmarks/bench_kernels.py [--repeats N]

The numba lane is compiled (and disk-cached) on first call; compile time is
excluded by a warmup pass.
"""

import argparse
import time

import numpy as np

from bochnerproj import _kernels


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_batch_penalty(impl, rng, repeats):
    w = rng.uniform(0.3, 2.0, 4)
    diffs = rng.standard_normal((10000, 4, 3))
    fn = impl["batch_penalty"]
    fn(w, diffs, 1.5, 3.0)  # warmup / compile
    return _time(lambda: fn(w, diffs, 1.5, 3.0), repeats)


def bench_row_norms(impl, rng, repeats):
    vals = rng.standard_normal((5, 3))
    fn = impl["row_norms"]
    fn(vals, 1.5)

    def run():
        for _ in range(2000):
            fn(vals, 1.5)

    return _time(run, repeats)


def bench_barrier_solve(impl, rng, repeats):
    bw = np.asarray([10.0 ** (-k) for k in range(1, 13)])
    problems = []
    for i in range(40):
        k, d = 4, 3
        problems.append(
            (
                rng.standard_normal((k, d)) * 2.0,
                rng.standard_normal((k, d)) * 0.2,
                rng.uniform(0.3, 2.0, k),
                np.ones(k),
                [1.5, 2.0, 3.0][i % 3],
                [3.0, 2.0, 1.5][i % 3],
            )
        )
    fn = impl["barrier_solve"]
    g0, c0, w0, m0, rho0, p0 = problems[0]
    fn(g0, c0, w0, m0, rho0, p0, 0.8 ** p0, bw, 1e-13, 1e-15, 20000)

    def run():
        for gact, cact, wact, cons, rho, p in problems:
            fn(gact, cact, wact, cons, rho, p, 0.8 ** p, bw, 1e-13, 1e-15, 20000)

    return _time(run, repeats)


BENCHES = [
    ("batch penalty, 10k x (4,3) audit batch", bench_batch_penalty),
    ("row norms, 2000 calls on (5,3)", bench_row_norms),
    ("barrier solve, 40 ball problems (4,3)", bench_barrier_solve),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    impls = _kernels.implementations()
    print(f"active backend: {_kernels.BACKEND}")
    if impls["numba"] is None:
        print("numba unavailable; timing the NumPy lane only")
    header = f"{'kernel':45s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}"
    print(header)
    print("-" * len(header))
    for label, bench in BENCHES:
        rng = np.random.default_rng(2024)
        t_np = bench(impls["numpy"], rng, args.repeats)
        if impls["numba"] is not None:
            rng = np.random.default_rng(2024)
            t_nb = bench(impls["numba"], rng, args.repeats)
            print(
                f"{label:45s} {t_np * 1e3:9.2f}ms {t_nb * 1e3:9.2f}ms "
                f"{t_np / t_nb:7.1f}x"
            )
        else:
            print(f"{label:45s} {t_np * 1e3:9.2f}ms {'-':>10s} {'-':>8s}")


if __name__ == "__main__":
    main()
