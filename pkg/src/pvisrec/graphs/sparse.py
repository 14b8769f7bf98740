"""Minimal immutable sparse matrix: COO entries plus cached CSR/CSC views.

Duplicate coordinates are aggregated at construction and zero weights
dropped, so entries are unique and strictly positive. Dense products
dispatch to the numba CSR kernel or the numpy COO scatter fallback.
"""

from __future__ import annotations

import numpy as np

from .. import accel, kernels
from ..errors import ValidationError
from ..kernels.sparse_numpy import coo_matmul_dense


class SparseMatrix:
    def __init__(self, n_rows: int, n_cols: int, rows: np.ndarray,
                 cols: np.ndarray, data: np.ndarray):
        if rows.shape != cols.shape or rows.shape != data.shape:
            raise ValidationError("coordinate arrays must share one shape")
        order = np.lexsort((cols, rows))
        self.n_rows = int(n_rows)
        self.n_cols = int(n_cols)
        self.rows = np.ascontiguousarray(rows[order], dtype=np.int64)
        self.cols = np.ascontiguousarray(cols[order], dtype=np.int64)
        self.data = np.ascontiguousarray(data[order], dtype=np.float64)
        if self.rows.size:
            if self.rows.min() < 0 or self.rows.max() >= n_rows:
                raise ValidationError("row index out of range")
            if self.cols.min() < 0 or self.cols.max() >= n_cols:
                raise ValidationError("column index out of range")
            same = (self.rows[1:] == self.rows[:-1]) & (self.cols[1:] == self.cols[:-1])
            if np.any(same):
                raise ValidationError("duplicate (row, col) entry")
            if np.any(self.data <= 0):
                raise ValidationError("weights must be positive")
        self._indptr = None
        self._csc = None

    @classmethod
    def from_entries(cls, n_rows: int, n_cols: int, rows, cols, data) -> "SparseMatrix":
        """Aggregate duplicate coordinates by summation, drop zero totals."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        data = np.asarray(data, dtype=np.float64)
        if rows.size == 0:
            return cls(n_rows, n_cols, rows, cols, data)
        keys = rows * np.int64(n_cols) + cols
        uniq, inverse = np.unique(keys, return_inverse=True)
        summed = np.bincount(inverse, weights=data, minlength=uniq.size)
        keep = summed != 0
        uniq = uniq[keep]
        summed = summed[keep]
        return cls(n_rows, n_cols, uniq // n_cols, uniq % n_cols, summed)

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> "SparseMatrix":
        rows, cols = np.nonzero(dense)
        return cls(dense.shape[0], dense.shape[1], rows, cols, dense[rows, cols])

    # -- derived forms ---------------------------------------------------

    @property
    def nnz(self) -> int:
        return self.data.size

    def density(self) -> float:
        cells = self.n_rows * self.n_cols
        return self.nnz / cells if cells else 0.0

    def _csr(self):
        if self._indptr is None:
            counts = np.bincount(self.rows, minlength=self.n_rows)
            self._indptr = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
        return self._indptr, self.cols, self.data

    def _csc_arrays(self):
        if self._csc is None:
            order = np.lexsort((self.rows, self.cols))
            counts = np.bincount(self.cols, minlength=self.n_cols)
            indptr = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
            self._csc = (indptr, np.ascontiguousarray(self.rows[order]),
                         np.ascontiguousarray(self.data[order]))
        return self._csc

    # -- queries ----------------------------------------------------------

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols))
        out[self.rows, self.cols] = self.data
        return out

    def row_sums(self) -> np.ndarray:
        return np.bincount(self.rows, weights=self.data, minlength=self.n_rows)

    def col_sums(self) -> np.ndarray:
        return np.bincount(self.cols, weights=self.data, minlength=self.n_cols)

    def total(self) -> float:
        return float(self.data.sum())

    def frobenius_sq(self) -> float:
        return float(np.dot(self.data, self.data))

    def entries_by_row(self):
        indptr, cols, data = self._csr()
        for r in range(self.n_rows):
            for p in range(indptr[r], indptr[r + 1]):
                yield int(r), int(cols[p]), float(data[p])

    def entries_by_col(self):
        indptr, rows, data = self._csc_arrays()
        for c in range(self.n_cols):
            for p in range(indptr[c], indptr[c + 1]):
                yield int(rows[p]), int(c), float(data[p])

    def binarized(self) -> "SparseMatrix":
        return SparseMatrix(self.n_rows, self.n_cols, self.rows, self.cols,
                            np.ones_like(self.data))

    # -- products ---------------------------------------------------------

    def matmul_dense(self, dense: np.ndarray) -> np.ndarray:
        """self (n x m) @ dense (m x d) -> n x d."""
        if dense.shape[0] != self.n_cols:
            raise ValidationError("shape mismatch in sparse @ dense")
        dense = np.ascontiguousarray(dense, dtype=np.float64)
        if accel.NUMBA_ENABLED:
            indptr, cols, data = self._csr()
            return kernels.csr_matmul_dense(indptr, cols, data, dense)
        return coo_matmul_dense(self.rows, self.cols, self.data, dense, self.n_rows)

    def t_matmul_dense(self, dense: np.ndarray) -> np.ndarray:
        """self.T (m x n) @ dense (n x d) -> m x d."""
        if dense.shape[0] != self.n_rows:
            raise ValidationError("shape mismatch in sparse.T @ dense")
        dense = np.ascontiguousarray(dense, dtype=np.float64)
        if accel.NUMBA_ENABLED:
            indptr, rows, data = self._csc_arrays()
            return kernels.csr_matmul_dense(indptr, rows, data, dense)
        return coo_matmul_dense(self.cols, self.rows, self.data, dense, self.n_cols)

    def cross_inner(self, left: np.ndarray, right: np.ndarray) -> float:
        """sum over stored entries of weight * (left_row . right_col)."""
        if self.nnz == 0:
            return 0.0
        prods = np.einsum("ij,ij->i", left[self.rows], right[self.cols])
        return float(np.dot(self.data, prods))
