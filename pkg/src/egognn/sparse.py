"""CSR sparse matrices: the workhorse type for all adjacency arithmetic.

All float storage is 64-bit; reductions run in a fixed (row-major,
ascending-column) order so repeated runs are bitwise reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels


class SparseError(ValueError):
    pass


@dataclass(frozen=True)
class SparseMatrix:
    """Canonical CSR matrix: sorted, deduplicated, no explicit zeros."""

    n_rows: int
    n_cols: int
    row_offsets: np.ndarray  # int64, length n_rows + 1
    col_indices: np.ndarray  # int64
    values: np.ndarray       # float64

    def __post_init__(self):
        for name in ("row_offsets", "col_indices", "values"):
            arr = getattr(self, name)
            arr.flags.writeable = False

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_coo(n_rows, n_cols, rows, cols, vals) -> "SparseMatrix":
        """Build canonical CSR from triplets; duplicates are summed and
        explicit zeros dropped."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        vals = np.asarray(vals, dtype=np.float64)
        if not (rows.shape == cols.shape == vals.shape):
            raise SparseError("triplet arrays must have equal length")
        if len(rows) and (rows.min() < 0 or rows.max() >= n_rows
                          or cols.min() < 0 or cols.max() >= n_cols):
            raise SparseError("triplet index out of range")
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        if len(rows):
            # sum duplicates
            key_change = np.empty(len(rows), dtype=bool)
            key_change[0] = True
            key_change[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
            group = np.cumsum(key_change) - 1
            summed = np.zeros(group[-1] + 1, dtype=np.float64)
            np.add.at(summed, group, vals)
            rows, cols = rows[key_change], cols[key_change]
            vals = summed
            keep = vals != 0.0
            rows, cols, vals = rows[keep], cols[keep], vals[keep]
        row_offsets = np.zeros(n_rows + 1, dtype=np.int64)
        np.add.at(row_offsets, rows + 1, 1)
        row_offsets = np.cumsum(row_offsets)
        return SparseMatrix(n_rows, n_cols, row_offsets, cols, vals)

    @staticmethod
    def from_dense(a) -> "SparseMatrix":
        a = np.asarray(a, dtype=np.float64)
        rows, cols = np.nonzero(a)
        return SparseMatrix.from_coo(a.shape[0], a.shape[1], rows, cols, a[rows, cols])

    @staticmethod
    def identity(n) -> "SparseMatrix":
        idx = np.arange(n, dtype=np.int64)
        return SparseMatrix(n, n, np.arange(n + 1, dtype=np.int64),
                            idx, np.ones(n, dtype=np.float64))

    @staticmethod
    def zeros(n_rows, n_cols) -> "SparseMatrix":
        return SparseMatrix(n_rows, n_cols, np.zeros(n_rows + 1, dtype=np.int64),
                            np.empty(0, dtype=np.int64), np.empty(0, dtype=np.float64))

    # -- basic queries -----------------------------------------------------

    @property
    def nnz(self) -> int:
        return len(self.values)

    def row(self, i):
        """(col_indices, values) of row i, ascending columns."""
        s, e = self.row_offsets[i], self.row_offsets[i + 1]
        return self.col_indices[s:e], self.values[s:e]

    def row_sums(self) -> np.ndarray:
        out = np.zeros(self.n_rows, dtype=np.float64)
        np.add.at(out, np.repeat(np.arange(self.n_rows), np.diff(self.row_offsets)),
                  self.values)
        return out

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols), dtype=np.float64)
        rows = np.repeat(np.arange(self.n_rows), np.diff(self.row_offsets))
        out[rows, self.col_indices] = self.values
        return out

    def transpose(self) -> "SparseMatrix":
        rows = np.repeat(np.arange(self.n_rows, dtype=np.int64),
                         np.diff(self.row_offsets))
        return SparseMatrix.from_coo(self.n_cols, self.n_rows,
                                     self.col_indices, rows, self.values)

    def is_symmetric(self, tol=0.0) -> bool:
        t = self.transpose()
        if not (np.array_equal(self.row_offsets, t.row_offsets)
                and np.array_equal(self.col_indices, t.col_indices)):
            return False
        return bool(np.max(np.abs(self.values - t.values), initial=0.0) <= tol)

    def equal(self, other: "SparseMatrix") -> bool:
        return (self.n_rows == other.n_rows and self.n_cols == other.n_cols
                and np.array_equal(self.row_offsets, other.row_offsets)
                and np.array_equal(self.col_indices, other.col_indices)
                and np.array_equal(self.values, other.values))


def spmm(a: SparseMatrix, b) -> np.ndarray:
    """Sparse x dense product with deterministic per-row summation order."""
    b = np.ascontiguousarray(b, dtype=np.float64)
    if b.ndim != 2:
        raise SparseError("dense operand must be 2-D")
    if a.n_cols != b.shape[0]:
        raise SparseError(
            f"dimension mismatch: sparse is {a.n_rows}x{a.n_cols}, dense has {b.shape[0]} rows")
    return kernels.spmm_csr(a.row_offsets, a.col_indices, a.values, b)


def normalize_sym(a: SparseMatrix) -> SparseMatrix:
    """D^{-1/2} A D^{-1/2} with D the row-sum diagonal; zero-sum rows map to
    zero rows (pseudo-inverse convention)."""
    if a.n_rows != a.n_cols:
        raise SparseError("normalize_sym requires a square matrix")
    if a.nnz and a.values.min() < 0:
        raise SparseError("normalize_sym requires non-negative entries")
    d = a.row_sums()
    scale = np.zeros_like(d)
    pos = d > 0
    scale[pos] = 1.0 / np.sqrt(d[pos])
    rows = np.repeat(np.arange(a.n_rows, dtype=np.int64), np.diff(a.row_offsets))
    vals = a.values * scale[rows] * scale[a.col_indices]
    return SparseMatrix.from_coo(a.n_rows, a.n_cols, rows, a.col_indices, vals)
