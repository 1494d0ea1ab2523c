"""Pure-numpy fallback for the compiled CSR kernels."""

import numpy as np

IMPL = "numpy"


def spmm_csr(row_offsets, col_indices, values, dense):
    """CSR x dense product. np.add.at applies updates in stored (row-major,
    ascending-column) order, matching the compiled kernel's summation order."""
    n = len(row_offsets) - 1
    out = np.zeros((n, dense.shape[1]), dtype=np.float64)
    if len(values) == 0:
        return out
    rows = np.repeat(np.arange(n, dtype=np.int64), np.diff(row_offsets))
    np.add.at(out, rows, values[:, None] * dense[col_indices])
    return out
