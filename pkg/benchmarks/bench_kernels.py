"""Benchmark the numba-jitted kernels against the pure-numpy fallbacks.

Run:  python benchmarks/bench_kernels.py [--repeats N]

Both paths are imported directly (ignoring the PVISREC_NUMBA flag), so one
process times the whole comparison. The first numba call compiles; a warmup
round keeps compilation out of the timings.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from pvisrec.kernels import sparse_numba as spb
from pvisrec.kernels import sparse_numpy as spn
from pvisrec.kernels import stats_numba as sb
from pvisrec.kernels import stats_numpy as sn


def timeit(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_psi(rng, repeats):
    columns = [rng.normal(size=int(rng.integers(64, 257))) for _ in range(100)]

    def run(kernel):
        def body():
            for col in columns:
                kernel(col)
        return body

    return ("psi features (100 columns)", timeit(run(sn.psi_kernel), repeats),
            timeit(run(sb.psi_kernel), repeats))


def bench_kendall(rng, repeats):
    x = rng.normal(size=512)
    y = np.sort(x)
    return ("kendall tau (n=512)", timeit(lambda: sn.kendall_tau(x, y), repeats),
            timeit(lambda: sb.kendall_tau(x, y), repeats))


def bench_kmeans(rng, repeats):
    vectors = [rng.normal(size=256) for _ in range(200)]

    def run(kernel):
        def body():
            for v in vectors:
                kernel(v, 4, 50)
        return body

    return ("1-d 4-means (200 vectors)", timeit(run(sn.kmeans_1d), repeats),
            timeit(run(sb.kmeans_1d), repeats))


def bench_sparse_matmul(rng, repeats):
    rows, cols, d = 2000, 1500, 16
    dense = (rng.random((rows, cols)) < 0.01) * rng.random((rows, cols))
    r, c = np.nonzero(dense)
    order = np.lexsort((c, r))
    r, c = r[order].astype(np.int64), c[order].astype(np.int64)
    data = dense[r, c]
    indptr = np.concatenate(([0], np.cumsum(np.bincount(r, minlength=rows)))).astype(np.int64)
    other = rng.standard_normal((cols, d))
    return ("sparse @ dense (nnz~30k, d=16)",
            timeit(lambda: spn.coo_matmul_dense(r, c, data, other, rows), repeats),
            timeit(lambda: spb.csr_matmul_dense(indptr, c, data, other), repeats))


def bench_weighted_solve(rng, repeats):
    rows, cols, d = 500, 400, 10
    dense = (rng.random((rows, cols)) < 0.02) * rng.random((rows, cols))
    r, c = np.nonzero(dense)
    order = np.lexsort((c, r))
    c = c[order].astype(np.int64)
    data = dense[r[order], c]
    indptr = np.concatenate(([0], np.cumsum(np.bincount(r, minlength=rows)))).astype(np.int64)
    other = rng.standard_normal((cols, d))
    neg_w = rng.random(cols) * 0.5
    gram = (other * neg_w[:, None]).T @ other
    return ("weighted row solves (500 x d=10)",
            timeit(lambda: spn.weighted_rows_solve(indptr, c, data, other, gram, neg_w, 0.01), repeats),
            timeit(lambda: spb.weighted_rows_solve(indptr, c, data, other, gram, neg_w, 0.01), repeats))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    rng = np.random.default_rng(0)

    # warm up the jitted kernels so compile time stays out of the numbers
    sb.psi_kernel(rng.normal(size=32))
    sb.kmeans_1d(rng.normal(size=32), 4, 50)
    spb.csr_matmul_dense(np.array([0, 1], dtype=np.int64), np.array([0], dtype=np.int64),
                         np.array([1.0]), np.ones((1, 2)))
    spb.weighted_rows_solve(np.array([0, 1], dtype=np.int64), np.array([0], dtype=np.int64),
                            np.array([1.0]), np.ones((1, 2)), np.eye(2),
                            np.ones(1), 0.1)

    benches = (bench_psi, bench_kendall, bench_kmeans, bench_sparse_matmul,
               bench_weighted_solve)
    print(f"{'kernel':<34s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}")
    for bench in benches:
        name, t_np, t_nb = bench(rng, args.repeats)
        print(f"{name:<34s} {t_np * 1e3:>8.2f}ms {t_nb * 1e3:>8.2f}ms "
              f"{t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
