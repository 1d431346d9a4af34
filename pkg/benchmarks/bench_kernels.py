"""Compare the compiled and pure-Python GF(2) sweep kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each case sweeps every k-dimensional affine subspace of Mat_3(F_2) for
elements of rank 3 and reports the best wall time per backend.
"""

import argparse
import time

from ffverify._kernels import _pykernels
from ffverify.subspace import pivot_patterns

CASES = [(9, 7), (9, 6)]


def best_time(impl, d, k, table, repeat):
    patterns = pivot_patterns(d, k)
    best, result = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = impl.sweep_gf2(d, k, patterns, table, 3, True)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    try:
        from ffverify._kernels import _ckernels
    except ImportError:
        _ckernels = None
        print("compiled kernels unavailable; timing the fallback only")
    table = _pykernels.rank_table(3, 3)
    print(f"{'case':>8} {'population':>11} {'python s':>9} {'cython s':>9} {'speedup':>8}")
    for d, k in CASES:
        tp, rp = best_time(_pykernels, d, k, table, args.repeat)
        if _ckernels is None:
            print(f"{f'({d},{k})':>8} {rp[0]:>11} {tp:>9.3f} {'-':>9} {'-':>8}")
            continue
        tc, rc = best_time(_ckernels, d, k, table, args.repeat)
        if rc != rp:
            raise SystemExit(f"backends disagree at ({d},{k})")
        print(f"{f'({d},{k})':>8} {rp[0]:>11} {tp:>9.3f} {tc:>9.3f} {tp / tc:>7.0f}x")


if __name__ == "__main__":
    main()
