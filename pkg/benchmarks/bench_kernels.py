"""Compare the compiled and pure-Python kernels on representative workloads.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from dtcode import _kernels
from dtcode.channel import ChannelSpec, enumerate_associated
from dtcode.exhaustive import _codeword_matrix
from dtcode.metric import distance_matrix, point_rows


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def workloads():
    # pair scan: every symbol pair of a Q=11 binary channel (2048 symbols)
    spec = ChannelSpec.build([-1, 1], list(range(0, 22, 2)))
    P = point_rows(enumerate_associated(spec), spec)
    yield "max_gap_pair  (2048 symbols)", lambda k: k.max_gap_pair(P)

    R = P[:512]
    yield "min_gap_matrix (2048 x 512)", lambda k: k.min_gap_matrix(P, R)

    # codebook search: the 16-symbol M=4 channel, n=2, six codewords
    spec = ChannelSpec.build([1, 4, 5, 7], [0, 4])
    T = enumerate_associated(spec)
    W = _codeword_matrix(distance_matrix(T, spec).d ** 2, 2)
    yield "max_min_codebook (256 words, size 6)", lambda k: k.max_min_codebook(W, 6, 10 ** 9)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _kernels.compiled is None:
        print("compiled kernels unavailable; only the fallback is timed")
    print(f"{'workload':40s} {'cython [s]':>12s} {'python [s]':>12s} {'speedup':>9s}")
    for name, fn in workloads():
        tp, rp = _time(lambda: fn(_kernels.fallback), args.repeat)
        if _kernels.compiled is None:
            print(f"{name:40s} {'-':>12s} {tp:12.4f} {'-':>9s}")
            continue
        tc, rc = _time(lambda: fn(_kernels.compiled), args.repeat)
        if isinstance(rc, np.ndarray):
            assert np.array_equal(rc, rp)
        else:
            assert tuple(rc)[:1] == tuple(rp)[:1]
        print(f"{name:40s} {tc:12.4f} {tp:12.4f} {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
