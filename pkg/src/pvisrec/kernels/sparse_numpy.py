"""Pure-numpy fallbacks for the sparse-product and weighted-solve kernels."""

from __future__ import annotations

import numpy as np


def coo_matmul_dense(rows: np.ndarray, cols: np.ndarray, data: np.ndarray,
                     dense: np.ndarray, n_rows: int) -> np.ndarray:
    """(sparse n_rows x n_cols) @ dense -> (n_rows x d)."""
    out = np.zeros((n_rows, dense.shape[1]), dtype=np.float64)
    if data.shape[0]:
        np.add.at(out, rows, data[:, None] * dense[cols])
    return out


def weighted_rows_solve(indptr: np.ndarray, indices: np.ndarray, data: np.ndarray,
                        other: np.ndarray, gram_neg: np.ndarray,
                        neg_weights: np.ndarray, lam: float) -> np.ndarray:
    """Per-row ridge solve for popularity-weighted implicit feedback.

    Row r minimizes sum_obs (val - u.other_j)^2 + sum_unobs w_j (u.other_j)^2
    + lam |u|^2, where gram_neg = other^T diag(w) other is shared across rows
    and the observed columns swap their w_j weight for weight 1.
    """
    n_rows = indptr.shape[0] - 1
    d = other.shape[1]
    out = np.empty((n_rows, d), dtype=np.float64)
    eye = lam * np.eye(d)
    for r in range(n_rows):
        lo, hi = indptr[r], indptr[r + 1]
        cols = indices[lo:hi]
        vals = data[lo:hi]
        block = other[cols]
        lhs = gram_neg + eye
        if cols.shape[0]:
            lhs = lhs + (block * (1.0 - neg_weights[cols])[:, None]).T @ block
            rhs = block.T @ vals
        else:
            rhs = np.zeros(d)
        out[r] = np.linalg.solve(lhs, rhs)
    return out


def scaled_rows_solve(indptr: np.ndarray, indices: np.ndarray, data: np.ndarray,
                      other: np.ndarray, gram: np.ndarray,
                      row_weights: np.ndarray, lam: float) -> np.ndarray:
    """Like :func:`weighted_rows_solve` but the unobserved weight is one scalar
    per row (the transposed half of the popularity-weighted factorization)."""
    n_rows = indptr.shape[0] - 1
    d = other.shape[1]
    out = np.empty((n_rows, d), dtype=np.float64)
    eye = lam * np.eye(d)
    for r in range(n_rows):
        lo, hi = indptr[r], indptr[r + 1]
        cols = indices[lo:hi]
        vals = data[lo:hi]
        block = other[cols]
        lhs = row_weights[r] * gram + eye
        if cols.shape[0]:
            lhs = lhs + (1.0 - row_weights[r]) * (block.T @ block)
            rhs = block.T @ vals
        else:
            rhs = np.zeros(d)
        out[r] = np.linalg.solve(lhs, rhs)
    return out
