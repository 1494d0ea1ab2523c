import numpy as np
import pytest

from egognn import kernel_impl
from egognn._kernels_py import spmm_csr as spmm_py
from egognn.kernels import spmm_csr
from egognn.sparse import SparseMatrix


def _random_csr(n_rows, n_cols, density, seed):
    rng = np.random.default_rng(seed)
    dense = rng.random((n_rows, n_cols)) * (rng.random((n_rows, n_cols)) < density)
    return SparseMatrix.from_dense(dense), dense


class TestKernelAgreement:
    @pytest.mark.parametrize("seed", range(10))
    def test_active_matches_pure_python(self, seed):
        a, dense = _random_csr(13, 9, 0.3, seed)
        b = np.random.default_rng(seed + 100).random((9, 5))
        got = spmm_csr(a.row_offsets, a.col_indices, a.values,
                       np.ascontiguousarray(b))
        want = spmm_py(a.row_offsets, a.col_indices, a.values,
                       np.ascontiguousarray(b))
        np.testing.assert_allclose(got, want, atol=0.0)
        np.testing.assert_allclose(got, dense @ b, atol=1e-12)

    def test_empty_matrix(self):
        a = SparseMatrix.zeros(4, 4)
        b = np.ones((4, 2))
        out = spmm_csr(a.row_offsets, a.col_indices, a.values, b)
        assert np.array_equal(out, np.zeros((4, 2)))

    def test_impl_reported(self):
        assert kernel_impl in ("cython", "numpy")

    def test_fallback_importable(self):
        # the pure-python path must stay usable even when the extension built
        out = spmm_py(np.array([0, 1], dtype=np.int64),
                      np.array([0], dtype=np.int64),
                      np.array([2.0]), np.array([[3.0]]))
        assert out[0, 0] == 6.0
