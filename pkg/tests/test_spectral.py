import numpy as np
import pytest

from conftest import cycle, edgeless
from egognn.graph import Graph
from egognn.multiplex import build_supra
from egognn.sbm import generate_er
from egognn.spectral import (SpectralError, check_interlacing, supra_spectrum,
                             sym_eigenvalues)
from egognn.sparse import SparseMatrix


class TestSymEigenvalues:
    def test_c3_characteristic_polynomial(self, c3):
        # det(A - xI) = -(x-2)(x+1)^2 for the 3-cycle
        np.testing.assert_allclose(sym_eigenvalues(c3.adjacency).eigenvalues,
                                   [2.0, -1.0, -1.0], atol=1e-8)

    def test_identity(self):
        spec = sym_eigenvalues(SparseMatrix.identity(4))
        np.testing.assert_allclose(spec.eigenvalues, np.ones(4), atol=1e-12)

    def test_k2(self):
        g = Graph.from_edges(2, [(0, 1)])
        np.testing.assert_allclose(sym_eigenvalues(g.adjacency).eigenvalues,
                                   [1.0, -1.0], atol=1e-8)

    def test_descending_order_and_residuals(self):
        g = generate_er(20, 0.3, 42)
        a = g.adjacency.to_dense()
        spec = sym_eigenvalues(g.adjacency).eigenvalues
        assert np.all(np.diff(spec) <= 1e-12)
        # residual check on recovered pairs
        vals, vecs = np.linalg.eigh(a)
        for lam, v in zip(vals, vecs.T):
            assert np.linalg.norm(a @ v - lam * v) <= 1e-6 * np.linalg.norm(v)

    def test_non_symmetric_rejected(self):
        a = SparseMatrix.from_dense([[0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(SpectralError):
            sym_eigenvalues(a)

    def test_trace_identity(self):
        g = generate_er(15, 0.4, 8)
        spec = sym_eigenvalues(g.adjacency).eigenvalues
        assert abs(spec.sum() - 0.0) <= 1e-8  # zero diagonal

    def test_disconnected_union_of_component_spectra(self, c3):
        g = Graph.from_edges(5, [(0, 1), (0, 2), (1, 2), (3, 4)])
        got = sym_eigenvalues(g.adjacency).eigenvalues
        want = np.sort(np.concatenate([[2, -1, -1], [1, -1]]))[::-1]
        np.testing.assert_allclose(got, want, atol=1e-8)


class TestInterlacing:
    def test_c6_hand_spectra(self, c6):
        res = check_interlacing(c6, 0)
        assert res.ok
        np.testing.assert_allclose(res.base.eigenvalues,
                                   [2, 1, 1, -1, -1, -2], atol=1e-8)
        s2 = np.sqrt(2)
        np.testing.assert_allclose(res.sub.eigenvalues, [s2, 0, -s2], atol=1e-8)

    def test_k2_degenerates_to_equality(self):
        g = Graph.from_edges(2, [(0, 1)])
        res = check_interlacing(g, 0)
        assert res.ok
        np.testing.assert_allclose(res.base.eigenvalues, res.sub.eigenvalues,
                                   atol=1e-12)

    @pytest.mark.parametrize("seed", range(10))
    def test_theorem_never_fails(self, seed):
        g = generate_er(14, 0.35, seed + 500)
        for i in range(g.n):
            assert check_interlacing(g, i).ok


class TestSupraSpectrum:
    def test_single_node(self):
        np.testing.assert_allclose(
            supra_spectrum(Graph.from_edges(1, [])).eigenvalues, [1.0])

    def test_edgeless_two_nodes(self):
        np.testing.assert_allclose(supra_spectrum(edgeless(2)).eigenvalues,
                                   [1.0, 1.0, 0.0, 0.0], atol=1e-12)

    def test_k2_matches_dense_oracle(self):
        g = Graph.from_edges(2, [(0, 1)])
        want = np.linalg.eigvalsh(build_supra(g).matrix.to_dense())[::-1]
        np.testing.assert_allclose(supra_spectrum(g).eigenvalues, want,
                                   atol=1e-12)

    def test_cap(self):
        with pytest.raises(SpectralError):
            supra_spectrum(edgeless(33))
