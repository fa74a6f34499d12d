#!/usr/bin/env python3
"""Benchmark the compiled kernel backend against the pure numpy fallback.

Two levels: raw kernel calls (rref / column annihilator / mat_mul on the
sizes the solver actually uses), and an end-to-end theorem sweep with the
backend switched at runtime.  Usage:

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from rangecompat import kernels
from rangecompat.algebra import GF


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernel_level(repeat):
    rng = np.random.default_rng(42)
    workloads = []
    for q, rows, cols, count in [(2, 3, 2, 4000), (3, 3, 2, 4000), (4, 3, 3, 2000),
                                 (3, 400, 15, 30), (2, 600, 28, 30)]:
        field = GF(q)
        mats = [rng.integers(0, q, size=(rows, cols), dtype=np.uint8) for _ in range(count)]
        workloads.append((f"rref {count}x({rows}x{cols}) F{q}", field,
                          lambda mats=mats, f=field: [kernels.rref(M, f.tables) for M in mats]))
        if rows <= 4:
            workloads.append((f"annihilator {count}x({rows}x{cols}) F{q}", field,
                              lambda mats=mats, f=field: [kernels.column_annihilator(M, f.tables)
                                                          for M in mats]))
    field = GF(3)
    A = rng.integers(0, 3, size=(1024, 6), dtype=np.uint8)
    B = rng.integers(0, 3, size=(6, 6), dtype=np.uint8)
    workloads.append(("mat_mul 1024x6 @ 6x6 F3 x100", field,
                      lambda: [kernels.mat_mul(A, B, field.tables) for _ in range(100)]))

    print(f"{'workload':42s}" + "".join(f"{name:>12s}" for name in kernels.available_backends())
          + f"{'speedup':>10s}")
    for label, _, fn in workloads:
        times = {}
        for name in kernels.available_backends():
            kernels.set_backend(name)
            times[name] = _time(fn, repeat)
        row = f"{label:42s}" + "".join(f"{times[n] * 1e3:>10.1f}ms" for n in sorted(times))
        if len(times) == 2:
            row += f"{times['python'] / times['cython']:>9.1f}x"
        print(row)


def bench_end_to_end(repeat):
    from rangecompat.verify import verify_theorem

    def sweep():
        r = verify_theorem("QRC_HOM", 3, 2, "F3", max_codim=0)
        assert r.passed
        r = verify_theorem("LIN1", 3, 2, "F2", max_codim=1)
        assert r.passed

    print()
    print("end-to-end sweep (QRC_HOM codim 0 + LIN1 F2 codim <= 1):")
    times = {}
    for name in kernels.available_backends():
        kernels.set_backend(name)
        times[name] = _time(sweep, repeat)
        print(f"  {name:8s} {times[name]:.2f}s")
    if len(times) == 2:
        print(f"  speedup  {times['python'] / times['cython']:.1f}x")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    original = kernels.backend_name()
    print(f"available backends: {kernels.available_backends()}")
    try:
        bench_kernel_level(args.repeat)
        bench_end_to_end(args.repeat)
    finally:
        kernels.set_backend(original)


if __name__ == "__main__":
    main()
