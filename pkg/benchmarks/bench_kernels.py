"""Benchmark the compiled numeric kernels against their pure-Python forms.

Each kernel in afcsim._kernels is a numba dispatcher wrapping a plain
function; this script times both on identical array workloads. Run with
AFCSIM_DISABLE_NUMBA=1 to confirm the fallback path carries the same
interface (both columns then time the same plain function).

Usage:
    python3 benchmarks/bench_kernels.py [--size 200000] [--repeats 5]
"""

import argparse
import timeit

import numpy as np

from afcsim import _kernels


def workloads(size: int, rng: np.random.Generator):
    lat1 = rng.uniform(-60.0, 60.0, size)
    lon1 = rng.uniform(-180.0, 180.0, size)
    lat2 = lat1 + rng.uniform(-0.5, 0.5, size)
    lon2 = lon1 + rng.uniform(-0.5, 0.5, size)
    distance = rng.uniform(50.0, 50_000.0, size)
    freq = rng.uniform(5_945.0, 7_125.0, size)
    noise = np.full(size, -95.99)
    gain = np.where(rng.uniform(0.0, 1.0, size) < 0.1, 30.0, 5.0)
    return {
        "haversine_arrays": (lat1, lon1, lat2, lon2),
        "eirp_chain_arrays": (distance, freq, 1_000.0, 20.0, noise, -6.0, gain),
    }


def best_time(fn, args, repeats: int) -> float:
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeats))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=200_000, help="elements per array")
    parser.add_argument("--repeats", type=int, default=5, help="timing repeats (best wins)")
    args = parser.parse_args(argv)

    rng = np.random.default_rng(7)
    cases = workloads(args.size, rng)

    print(f"numba active: {_kernels.USING_NUMBA}   size: {args.size:,}   repeats: {args.repeats}")
    print(f"{'kernel':<22} {'compiled':>12} {'pure':>12} {'speedup':>9}")
    for name, call_args in cases.items():
        fn = getattr(_kernels, name)
        pure = getattr(fn, "py_func", fn)
        fn(*call_args)  # trigger JIT compilation outside the timed region
        compiled_s = best_time(fn, call_args, args.repeats)
        pure_s = best_time(pure, call_args, args.repeats)
        ratio = pure_s / compiled_s if compiled_s > 0 else float("inf")
        print(f"{name:<22} {compiled_s * 1e3:>10.2f}ms {pure_s * 1e3:>10.2f}ms {ratio:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
