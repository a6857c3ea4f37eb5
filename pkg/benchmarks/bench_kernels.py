"""Time the compiled reduction kernels against the pure-Python ones.

    python3 benchmarks/bench_kernels.py [--sizes 3 4 6 10] [--count 300] [--seed 0]

Both backends run on the same random matrices; results are compared so a
speedup is only reported for agreeing outputs.  Calls the compiled kernel
rejects with OverflowError are counted, and the Python time is scaled to
the calls the compiled kernel finished.
"""

from __future__ import annotations

import argparse
import random
import sys
import time

from wlskit import _kernels_py

try:
    from wlskit import _kernels
except ImportError:
    _kernels = None


def _matrices(rng: random.Random, size: int, count: int, bound: int) -> list[list[list[int]]]:
    return [[[rng.randint(-bound, bound) for _ in range(size)] for _ in range(size)] for _ in range(count)]


def _time(fn, mats, size) -> tuple[float, list, int]:
    out, overflows = [], 0
    start = time.perf_counter()
    for rows in mats:
        try:
            out.append(fn(rows, size))
        except OverflowError:
            out.append(None)
            overflows += 1
    return time.perf_counter() - start, out, overflows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[3, 4, 6, 10])
    ap.add_argument("--count", type=int, default=300)
    ap.add_argument("--bound", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled kernels not built; run `pip install -e . --no-build-isolation` first", file=sys.stderr)
        return 1

    kernels = {
        "smith": (lambda rows, n: _kernels.smith(rows, n, n), lambda rows, n: _kernels_py.smith(rows, n, n)),
        "echelon": (lambda rows, n: _kernels.echelon(rows, n, True), lambda rows, n: _kernels_py.echelon(rows, n, True)),
    }
    rng = random.Random(args.seed)
    print(f"{'kernel':<8} {'size':>4} {'count':>6} {'cython s':>10} {'python s':>10} {'speedup':>8} {'overflow':>8}")
    for size in args.sizes:
        mats = _matrices(rng, size, args.count, args.bound)
        for name, (fast, slow) in kernels.items():
            t_fast, out_fast, over = _time(fast, mats, size)
            t_slow, out_slow, _ = _time(slow, mats, size)
            mismatched = sum(1 for a, b in zip(out_fast, out_slow) if a is not None and a != b)
            if mismatched:
                print(f"{name} size {size}: {mismatched} results differ between backends", file=sys.stderr)
                return 1
            # scale the python time to the calls the compiled kernel finished
            done = args.count - over
            t_slow_done = t_slow * done / args.count if args.count else 0.0
            speedup = f"{t_slow_done / t_fast:.1f}x" if done and t_fast > 0 else "n/a"
            print(f"{name:<8} {size:>4} {args.count:>6} {t_fast:>10.4f} {t_slow:>10.4f} {speedup:>8} {over:>8}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
