"""Desk-scale spectral checks: symmetric eigenvalues, Cauchy interlacing of
ego-subgraph spectra, and the supra-adjacency spectrum.

Interlacing is checked against the self-loop-free induced submatrix (a true
principal submatrix of A); self-loops would shift the diagonal and break the
interlacing hypothesis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, ego_members
from .multiplex import build_supra
from .sparse import SparseMatrix

EIGEN_DIM_CAP = 1024
SUPRA_SPECTRUM_CAP = 32
INTERLACING_TOL = 1e-7


class SpectralError(ValueError):
    pass


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray  # descending

    def __post_init__(self):
        self.eigenvalues.flags.writeable = False


@dataclass(frozen=True)
class InterlacingResult:
    ok: bool
    base: Spectrum
    sub: Spectrum


def _eigs_desc(dense) -> np.ndarray:
    return np.linalg.eigvalsh(dense)[::-1].copy()


def sym_eigenvalues(a: SparseMatrix) -> Spectrum:
    if a.n_rows != a.n_cols:
        raise SpectralError("matrix must be square")
    if a.n_rows > EIGEN_DIM_CAP:
        raise SpectralError(f"dimension {a.n_rows} exceeds cap {EIGEN_DIM_CAP}")
    if not a.is_symmetric(tol=0.0):
        raise SpectralError("matrix must be symmetric")
    return Spectrum(_eigs_desc(a.to_dense()))


def check_interlacing(g: Graph, i, tol=INTERLACING_TOL) -> InterlacingResult:
    """Cauchy interlacing of the ego principal submatrix against the base
    adjacency: lam_m(A) >= lam_m(B) >= lam_{m+n-k}(A)."""
    members = ego_members(g, i)
    k = len(members)
    n = g.n
    lam = _eigs_desc(g.adjacency.to_dense())
    sub = g.adjacency.to_dense()[np.ix_(members, members)]
    mu = _eigs_desc(sub)
    ok = all(
        lam[m] + tol >= mu[m] and mu[m] + tol >= lam[m + n - k]
        for m in range(k)
    )
    return InterlacingResult(bool(ok), Spectrum(lam), Spectrum(mu))


def supra_spectrum(g: Graph) -> Spectrum:
    """Eigenvalues of the full supra-adjacency (inspection only; |V| <= 32)."""
    if g.n > SUPRA_SPECTRUM_CAP:
        raise SpectralError(f"|V|={g.n} exceeds supra spectrum cap {SUPRA_SPECTRUM_CAP}")
    s = build_supra(g, cap=SUPRA_SPECTRUM_CAP)
    return Spectrum(_eigs_desc(s.matrix.to_dense()))
