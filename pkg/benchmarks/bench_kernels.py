#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Times the two hot kernels (the quartic panel scan driving the ICA
fixed-point iteration, and the drawdown scan) plus an end-to-end ICA
decomposition under each backend.  The end-to-end comparison swaps the
dispatcher's bound kernel in process, which works because callers resolve
``_kernels.quartic_accumulate`` at call time.

    python3 benchmarks/bench_kernels.py [--T 200000] [--n 10] [--reps 5]
"""

import argparse
import time

import numpy as np

from tailfolio import _kernels
from tailfolio._kernels import fallback
from tailfolio.ica import IcaConfig, ica_decompose

try:
    from tailfolio._kernels import _core
except ImportError:
    _core = None


def best_of(fn, reps):
    timings = []
    for _ in range(reps):
        start = time.perf_counter()
        fn()
        timings.append(time.perf_counter() - start)
    return min(timings)


def row(name, numpy_time, cython_time):
    if cython_time is None:
        print(f"{name:<28} {numpy_time * 1e3:>10.2f} ms {'-':>12} {'-':>9}")
    else:
        print(
            f"{name:<28} {numpy_time * 1e3:>10.2f} ms {cython_time * 1e3:>9.2f} ms "
            f"{numpy_time / cython_time:>8.2f}x"
        )


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--T", type=int, default=200_000, dest="T")
    parser.add_argument("--n", type=int, default=10)
    parser.add_argument("--reps", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    panel = np.ascontiguousarray(rng.laplace(size=(args.T, args.n)))
    weight = rng.standard_normal(args.n)
    curve = np.ascontiguousarray(np.cumprod(1.0 + 0.01 * rng.standard_normal(args.T)))

    print(f"panel {args.T} x {args.n}; best of {args.reps} runs")
    print(f"{'kernel':<28} {'numpy':>13} {'cython':>12} {'speedup':>9}")

    numpy_quartic = best_of(lambda: fallback.quartic_accumulate(panel, weight), args.reps)
    cython_quartic = (
        best_of(lambda: _core.quartic_accumulate(panel, weight), args.reps)
        if _core
        else None
    )
    row("quartic_accumulate", numpy_quartic, cython_quartic)

    numpy_dd = best_of(lambda: fallback.max_drawdown_scan(curve), args.reps)
    cython_dd = (
        best_of(lambda: _core.max_drawdown_scan(curve), args.reps) if _core else None
    )
    row("max_drawdown_scan", numpy_dd, cython_dd)

    mixing = rng.standard_normal((args.n, args.n))
    mixed = np.ascontiguousarray(panel @ mixing.T)
    config = IcaConfig(seed=1)

    original = _kernels.quartic_accumulate
    try:
        _kernels.quartic_accumulate = fallback.quartic_accumulate
        numpy_ica = best_of(lambda: ica_decompose(mixed, args.n, config), max(1, args.reps // 2))
        cython_ica = None
        if _core:
            _kernels.quartic_accumulate = _core.quartic_accumulate
            cython_ica = best_of(
                lambda: ica_decompose(mixed, args.n, config), max(1, args.reps // 2)
            )
    finally:
        _kernels.quartic_accumulate = original
    row("ica_decompose (end-to-end)", numpy_ica, cython_ica)

    if _core is None:
        print("\ncompiled backend not built; run `python3 setup.py build_ext --inplace`")


if __name__ == "__main__":
    main()
