"""The numba and pure-numpy kernel paths must agree numerically."""

import numpy as np
import pytest

numba = pytest.importorskip("numba")

from pvisrec.kernels import stats_numba as sb
from pvisrec.kernels import stats_numpy as sn
from pvisrec.kernels import sparse_numba as spb
from pvisrec.kernels import sparse_numpy as spn


def _fuzz_vectors(seed, count):
    rng = np.random.default_rng(seed)
    for trial in range(count):
        n = int(rng.integers(1, 80))
        kind = trial % 4
        if kind == 0:
            v = rng.normal(3.0, 2.5, size=n)
        elif kind == 1:
            v = rng.integers(-3, 4, size=n).astype(float)     # heavy ties
        elif kind == 2:
            v = np.full(n, float(rng.integers(0, 3)))          # constant
        else:
            v = rng.exponential(2.0, size=n)
            if n > 2:
                v[rng.integers(0, n)] = np.nan                 # missing cells
        yield v


def test_psi_parity():
    for v in _fuzz_vectors(0, 120):
        a = sn.psi_kernel(v)
        b = sb.psi_kernel(v)
        np.testing.assert_allclose(a, b, rtol=1e-9, atol=1e-9)


def test_correlation_parity():
    rng = np.random.default_rng(1)
    for _ in range(60):
        n = int(rng.integers(2, 100))
        x = rng.integers(0, 6, size=n).astype(float)
        y = np.sort(x) if rng.random() < 0.5 else rng.normal(size=n)
        for f_np, f_nb in ((sn.kendall_tau, sb.kendall_tau),
                           (sn.spearman_rho, sb.spearman_rho),
                           (sn.pearson_r, sb.pearson_r)):
            r1, p1 = f_np(x, y)
            r2, p2 = f_nb(x, y)
            assert abs(r1 - r2) < 1e-10
            assert abs(p1 - p2) < 1e-10


def test_kmeans_parity():
    rng = np.random.default_rng(2)
    for _ in range(60):
        n = int(rng.integers(1, 120))
        v = (rng.integers(0, 8, size=n).astype(float) if rng.random() < 0.5
             else rng.normal(size=n))
        c1, a1, i1 = sn.kmeans_1d(v, 4, 50)
        c2, a2, i2 = sb.kmeans_1d(v, 4, 50)
        np.testing.assert_allclose(c1, c2, rtol=1e-12, atol=1e-12)
        assert np.array_equal(a1, a2)
        assert i1 == i2
        s1 = sn.silhouette_1d(v, a1, 4)
        s2 = sb.silhouette_1d(v, a2, 4)
        assert abs(s1 - s2) < 1e-9


def test_quartile_parity():
    rng = np.random.default_rng(3)
    for _ in range(40):
        v = rng.normal(size=int(rng.integers(1, 50)))
        assert sn.quartiles(v) == pytest.approx(sb.quartiles(v), abs=1e-12)


def _random_csr(rng, rows, cols, density=0.4):
    dense = (rng.random((rows, cols)) < density) * rng.random((rows, cols))
    r, c = np.nonzero(dense)
    order = np.lexsort((c, r))
    r, c = r[order], c[order]
    data = dense[r, c]
    indptr = np.concatenate(([0], np.cumsum(np.bincount(r, minlength=rows)))).astype(np.int64)
    return dense, indptr, c.astype(np.int64), data


def test_sparse_matmul_parity():
    rng = np.random.default_rng(4)
    for _ in range(20):
        rows, cols, d = (int(x) for x in rng.integers(2, 12, size=3))
        dense, indptr, idx, data = _random_csr(rng, rows, cols)
        other = rng.standard_normal((cols, d))
        got = spb.csr_matmul_dense(indptr, idx, data, other)
        r, c = np.nonzero(dense)
        want = spn.coo_matmul_dense(r.astype(np.int64), c.astype(np.int64),
                                    dense[r, c], other, rows)
        np.testing.assert_allclose(got, want, atol=1e-12)
        np.testing.assert_allclose(got, dense @ other, atol=1e-12)


def test_weighted_solver_parity():
    rng = np.random.default_rng(5)
    for _ in range(20):
        rows, cols, d = 6, 7, 3
        dense, indptr, idx, data = _random_csr(rng, rows, cols)
        other = rng.standard_normal((cols, d))
        neg_w = rng.random(cols)
        gram_neg = (other * neg_w[:, None]).T @ other
        a = spn.weighted_rows_solve(indptr, idx, data, other, gram_neg, neg_w, 0.1)
        b = spb.weighted_rows_solve(indptr, idx, data, other, gram_neg, neg_w, 0.1)
        np.testing.assert_allclose(a, b, rtol=1e-9, atol=1e-10)
        row_w = rng.random(rows)
        gram = other.T @ other
        densez, indptr2, idx2, data2 = _random_csr(rng, rows, cols)
        c = spn.scaled_rows_solve(indptr2, idx2, data2, other, gram, row_w, 0.1)
        e = spb.scaled_rows_solve(indptr2, idx2, data2, other, gram, row_w, 0.1)
        np.testing.assert_allclose(c, e, rtol=1e-9, atol=1e-10)
