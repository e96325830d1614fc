"""Benchmark the compiled kernels against the NumPy fallback.

Runs each hot kernel on synthetic workloads sized like real per-user tables,
checks both backends agree to the bit, and prints a timing table with the
speedup. Exits nonzero if the compiled extension is unavailable or the
backends disagree, so CI can gate on it.

Usage: python benchmarks/bench_kernels.py [--sizes 200,2000,20000] [--repeat 5]
"""

import argparse
import sys
import time

import numpy as np

from egowords._kernels import _pure

try:
    from egowords._kernels import _speedups
except ImportError:
    _speedups = None


def _workload(n: int, seed: int):
    """Sorted log-frequency-like values plus the prefix sums the kernels take."""
    rng = np.random.default_rng(seed)
    centers = rng.uniform(1.0, 6.0, size=max(2, n // 40))
    values = np.sort(rng.choice(centers, size=n) + rng.normal(0.0, 0.12, size=n))
    prefix = np.zeros(n + 1)
    np.cumsum(values, out=prefix[1:])
    return values, prefix


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_shift(mod, values, prefix, bandwidth):
    seeds = values.copy()
    return mod.shift_seeds(values, prefix, seeds, bandwidth, 1e-7, 500)


def bench_knn(mod, values, k):
    return mod.knn_distances(values, k)


def bench_tail(mod, values):
    ln = np.log(values)
    suffix = np.zeros(len(values) + 1)
    suffix[:-1] = np.cumsum(ln[::-1])[::-1]
    return mod.tail_scan(values, ln, suffix, 1000)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="200,2000,20000",
                        help="comma-separated workload sizes")
    parser.add_argument("--repeat", type=int, default=5, help="timing repeats (best kept)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    if _speedups is None:
        print("compiled extension not built; nothing to compare", file=sys.stderr)
        return 1

    sizes = [int(s) for s in args.sizes.split(",") if s]
    header = f"{'kernel':<10} {'n':>8} {'pure (ms)':>12} {'compiled (ms)':>14} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    failures = 0
    for n in sizes:
        values, prefix = _workload(n, args.seed)
        bandwidth = 0.25
        k = max(1, n // 10)
        cases = [
            ("shift", lambda m: bench_shift(m, values, prefix, bandwidth)),
            ("knn", lambda m: bench_knn(m, values, k)),
            ("tailscan", lambda m: bench_tail(m, np.exp(values))),
        ]
        for name, call in cases:
            got_pure = call(_pure)
            got_fast = call(_speedups)
            pure_parts = got_pure if isinstance(got_pure, tuple) else (got_pure,)
            fast_parts = got_fast if isinstance(got_fast, tuple) else (got_fast,)
            agree = len(pure_parts) == len(fast_parts) and all(
                np.array_equal(np.asarray(a), np.asarray(b))
                for a, b in zip(pure_parts, fast_parts)
            )
            if not agree:
                print(f"{name:<10} {n:>8}  BACKENDS DISAGREE", file=sys.stderr)
                failures += 1
                continue
            t_pure = _time(lambda: call(_pure), args.repeat)
            t_fast = _time(lambda: call(_speedups), args.repeat)
            speedup = t_pure / t_fast if t_fast > 0 else float("inf")
            print(
                f"{name:<10} {n:>8} {t_pure * 1e3:>12.3f} {t_fast * 1e3:>14.3f} {speedup:>8.1f}x"
            )
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
