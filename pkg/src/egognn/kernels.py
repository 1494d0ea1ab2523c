"""Kernel selection: prefer the compiled extension, fall back to numpy.

Both implementations share the same summation order, so results agree to
floating-point determinism within either implementation.
"""

try:
    from ._kernels import IMPL, spmm_csr  # noqa: F401
except ImportError:  # extension not built
    from ._kernels_py import IMPL, spmm_csr  # noqa: F401
