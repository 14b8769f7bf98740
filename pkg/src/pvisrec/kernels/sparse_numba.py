"""Numba-jitted twins of the kernels in ``sparse_numpy`` (CSR layout)."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def csr_matmul_dense(indptr, indices, data, dense):
    n_rows = indptr.shape[0] - 1
    d = dense.shape[1]
    out = np.zeros((n_rows, d), dtype=np.float64)
    for r in range(n_rows):
        for p in range(indptr[r], indptr[r + 1]):
            c = indices[p]
            w = data[p]
            for j in range(d):
                out[r, j] += w * dense[c, j]
    return out


@njit(cache=True)
def weighted_rows_solve(indptr, indices, data, other, gram_neg, neg_weights, lam):
    n_rows = indptr.shape[0] - 1
    d = other.shape[1]
    out = np.empty((n_rows, d), dtype=np.float64)
    for r in range(n_rows):
        lhs = gram_neg.copy()
        for j in range(d):
            lhs[j, j] += lam
        rhs = np.zeros(d, dtype=np.float64)
        for p in range(indptr[r], indptr[r + 1]):
            c = indices[p]
            val = data[p]
            boost = 1.0 - neg_weights[c]
            for a in range(d):
                oa = other[c, a]
                rhs[a] += val * oa
                for b in range(d):
                    lhs[a, b] += boost * oa * other[c, b]
        out[r] = np.linalg.solve(lhs, rhs)
    return out


@njit(cache=True)
def scaled_rows_solve(indptr, indices, data, other, gram, row_weights, lam):
    n_rows = indptr.shape[0] - 1
    d = other.shape[1]
    out = np.empty((n_rows, d), dtype=np.float64)
    for r in range(n_rows):
        lhs = row_weights[r] * gram
        for j in range(d):
            lhs[j, j] += lam
        rhs = np.zeros(d, dtype=np.float64)
        boost = 1.0 - row_weights[r]
        for p in range(indptr[r], indptr[r + 1]):
            c = indices[p]
            val = data[p]
            for a in range(d):
                oa = other[c, a]
                rhs[a] += val * oa
                for b in range(d):
                    lhs[a, b] += boost * oa * other[c, b]
        out[r] = np.linalg.solve(lhs, rhs)
    return out
