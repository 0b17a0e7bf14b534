"""Time the compiled kernels against the numpy fallback on identical inputs.

    python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from orthoreal import _kernels_py

try:
    from orthoreal import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _cases(rng: np.random.Generator):
    p, d = 7, 6
    forms = rng.integers(0, p, size=(3, d, d), dtype=np.int64)
    targets = rng.integers(0, p, size=3, dtype=np.int64)
    yield "scan_quadratic p=7 d=6", lambda m: m.scan_quadratic(p, d, forms, targets, 10**6)
    n, k = 20000, 8
    cand = rng.integers(0, 5, size=(n, k), dtype=np.int64)
    rows = rng.integers(0, 5, size=(4, k), dtype=np.int64)
    tg = rng.integers(0, 5, size=4, dtype=np.int64)
    yield "filter_bilinear p=5 20000x8", lambda m: m.filter_bilinear(5, rows, cand, tg)
    mats = rng.integers(0, 3, size=(5000, 6, 6), dtype=np.int64)
    yield "batch_rank p=3 5000 6x6", lambda m: m.batch_rank(3, mats)


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"{'kernel':32} {'numpy (s)':>10} {'cython (s)':>11} {'speedup':>8}")
    for name, fn in _cases(rng):
        t_py = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat))
        if _ckernels is None:
            print(f"{name:32} {t_py:10.4f} {'n/a':>11} {'n/a':>8}")
            continue
        a, b = fn(_kernels_py), fn(_ckernels)
        if not np.array_equal(np.asarray(a), np.asarray(b)):
            raise SystemExit(f"{name}: backends disagree")
        t_c = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat))
        print(f"{name:32} {t_py:10.4f} {t_c:11.4f} {t_py / t_c:7.1f}x")


if __name__ == "__main__":
    main()
