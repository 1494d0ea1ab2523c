# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled CSR kernels. A pure-numpy fallback lives in _kernels_py."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

IMPL = "cython"


def spmm_csr(const cnp.int64_t[::1] row_offsets,
             const cnp.int64_t[::1] col_indices,
             const cnp.double_t[::1] values,
             const cnp.double_t[:, ::1] dense):
    """CSR x dense product, accumulating in ascending column order per row."""
    cdef Py_ssize_t n = row_offsets.shape[0] - 1
    cdef Py_ssize_t f = dense.shape[1]
    out_arr = np.zeros((n, f), dtype=np.float64)
    cdef cnp.double_t[:, ::1] out = out_arr
    cdef Py_ssize_t i, k, j, c
    cdef double v
    for i in range(n):
        for k in range(row_offsets[i], row_offsets[i + 1]):
            c = col_indices[k]
            v = values[k]
            for j in range(f):
                out[i, j] += v * dense[c, j]
    return out_arr
