"""Supra-adjacency construction and the expensive reference formulations.

These are validation paths, not production paths: build_supra materializes a
|V|^2 x |V|^2 block-sparse matrix and tiled_intra_step a |V|^2 x f dense
state. Both are capped to desk scale; the memory-efficient equivalent lives
in `propagation`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, degrees, ego_dense_block
from .sparse import SparseMatrix, spmm

SUPRA_SIZE_CAP = 512


class SupraSizeError(ValueError):
    pass


@dataclass(frozen=True)
class SupraAdjacency:
    base_n: int
    matrix: SparseMatrix  # |V|^2 x |V|^2


@dataclass(frozen=True)
class TiledState:
    """Node representations tiled vertically |V| times: block j holds the
    representation of every node inside the j-th ego-graph."""

    base_n: int
    data: np.ndarray  # |V|^2 x f


def build_supra(g: Graph, cap=SUPRA_SIZE_CAP, include_inter=True) -> SupraAdjacency:
    """Diagonal blocks: ego adjacencies (intra-layer). Off-diagonal block
    (i,j): identity iff (i,j) is an edge (inter-layer, A Kronecker I).

    include_inter=False zeroes the inter-layer term; used by the
    decomposition cross-checks.
    """
    n = g.n
    if n < 1:
        raise SupraSizeError("graph must have at least one node")
    if n > cap:
        raise SupraSizeError(
            f"|V|={n} exceeds the supra-adjacency cap {cap}; "
            "use egognn.propagation for the memory-efficient path")
    rows, cols, vals = [], [], []
    for i in range(n):
        members, block = ego_dense_block(g, i)
        br, bc = np.nonzero(block)
        rows.append(i * n + members[br])
        cols.append(i * n + members[bc])
        vals.append(block[br, bc])
    if include_inter:
        k = np.arange(n, dtype=np.int64)
        for u in range(n):
            for v in g.neighbors(u):
                rows.append(u * n + k)
                cols.append(int(v) * n + k)
                vals.append(np.ones(n))
    matrix = SparseMatrix.from_coo(n * n, n * n, np.concatenate(rows),
                                   np.concatenate(cols), np.concatenate(vals))
    return SupraAdjacency(n, matrix)


def tile(h, n) -> np.ndarray:
    h = np.asarray(h, dtype=np.float64)
    return np.tile(h, (n, 1))


def tiled_intra_step(g: Graph, h, p: int) -> TiledState:
    """Apply the block-diagonal intra-layer operator p times to the vertical
    tiling of h: block j of the result is A_j^p h."""
    if p < 1:
        raise ValueError("p must be >= 1")
    h = np.asarray(h, dtype=np.float64)
    if h.shape[0] != g.n:
        raise ValueError("h must have one row per node")
    n = g.n
    data = np.zeros((n * n, h.shape[1]))
    for j in range(n):
        members, block = ego_dense_block(g, j)
        hb = h[members]
        for _ in range(p):
            hb = block @ hb
        data[j * n + members] = hb
    return TiledState(n, data)


def tiled_aggregate(g: Graph, t: TiledState) -> np.ndarray:
    """Average each node's representation over the ego-graphs containing it:
    H[i] = sum_{j in Ego(i)} data[j*|V| + i] / |Ego(i)| (0-based rows)."""
    n = g.n
    if t.base_n != n or t.data.shape[0] != n * n:
        raise ValueError("tiled state does not match graph size")
    deg = degrees(g).degrees
    out = np.zeros((n, t.data.shape[1]))
    for i in range(n):
        ego_of = np.append(g.neighbors(i), i)
        ego_of.sort()
        for j in ego_of:
            out[i] += t.data[j * n + i]
        out[i] /= deg[i] + 1
    return out


def supra_propagate(s: SupraAdjacency, h, steps: int) -> np.ndarray:
    """Reference oracle: Ã^steps applied to the vertical tiling of h."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    cur = tile(h, s.base_n)
    for _ in range(steps):
        cur = spmm(s.matrix, cur)
    return cur
