"""Time the pure-Python kernel lane against the compiled extension.

Runs the three hot loops (enumeration census, fixed-point sampling, rank
sampling) in both lanes, checks that they return identical results, and
reports the speedup.

Usage: python benchmarks/bench_kernels.py [--trials N] [--seed S]
"""

from __future__ import annotations

import argparse
import time

from hatcheck._kernels import pure

try:
    from hatcheck._kernels import _fast
except ImportError:
    _fast = None


def _time(fn, *args):
    start = time.perf_counter()
    result = fn(*args)
    return result, time.perf_counter() - start


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=200_000)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    if _fast is None:
        print("compiled lane is not available; build the extension first")
        return 1

    cases = [
        ("census (8,8,6)", "fixed_point_census", (8, 8, 6)),
        (
            f"sample fixed points (10,10,10) x {args.trials}",
            "sample_fixed_point_counts",
            (10, 10, 10, args.seed, 0, args.trials),
        ),
        (
            f"sample ranks (4,4,4) x {args.trials}",
            "sample_matching_ranks",
            (4, 4, 4, args.seed, 0, args.trials),
        ),
    ]
    print(f"{'case':45} {'pure':>10} {'compiled':>10} {'speedup':>9}")
    for label, name, call_args in cases:
        pure_result, pure_seconds = _time(getattr(pure, name), *call_args)
        fast_result, fast_seconds = _time(getattr(_fast, name), *call_args)
        if pure_result != fast_result:
            print(f"{label:45} LANES DISAGREE")
            return 1
        speedup = pure_seconds / fast_seconds if fast_seconds else float("inf")
        print(
            f"{label:45} {pure_seconds:9.3f}s {fast_seconds:9.3f}s {speedup:8.1f}x"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
