"""Production ego-graph propagation and GCN-style layers.

The iterative path accumulates A_j^p h ego-graph by ego-graph into a single
|V| x f buffer, never the |V|^2 x f tiled state. PropagationReport records
the peak number of dense rows held at once so tests can enforce the memory
contract (<= 2|V|).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, degrees, ego_dense_block
from .sparse import SparseMatrix, spmm


@dataclass(frozen=True)
class EgoLayerConfig:
    p: int = 1
    normalized: bool = True

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("ego scale p must be >= 1")


@dataclass(frozen=True)
class GcnLayerConfig:
    normalized: bool = True
    out_dim: int | None = None  # None: propagate only, no weights


@dataclass
class PropagationReport:
    peak_block_rows: int = 0
    wall_time: float = 0.0

    def observe(self, rows):
        self.peak_block_rows = max(self.peak_block_rows, rows)


def _normalize_block(block):
    # symmetric normalization of a dense non-negative block
    d = block.sum(axis=1)
    s = np.where(d > 0, 1.0 / np.sqrt(np.where(d > 0, d, 1.0)), 0.0)
    return block * s[:, None] * s[None, :]


def _ego_accumulate(g: Graph, h, p, normalized, report):
    n = g.n
    if h.shape[0] != n:
        raise ValueError("h must have one row per node")
    acc = np.zeros((n, h.shape[1]))
    start = time.perf_counter()
    for j in range(n):
        members, block = ego_dense_block(g, j)
        if normalized:
            block = _normalize_block(block)
        hb = h[members]
        for _ in range(p):
            hb = block @ hb  # p repeated products restricted to members
        acc[members] += hb
        if report is not None:
            report.observe(n + len(members))
    if report is not None:
        report.wall_time += time.perf_counter() - start
    return acc


def ego_step_raw(g: Graph, h, p: int = 1, report: PropagationReport | None = None):
    """H[i] = (sum_j A_j^p h)[i] / |Ego(i)|, without tiled state."""
    if p < 1:
        raise ValueError("p must be >= 1")
    h = np.asarray(h, dtype=np.float64)
    acc = _ego_accumulate(g, h, p, normalized=False, report=report)
    return acc / (degrees(g).degrees + 1)[:, None]


def ego_step(g: Graph, h, cfg: EgoLayerConfig = EgoLayerConfig(),
             report: PropagationReport | None = None):
    """Normalized model step: H[i] = (sum_j Ahat_j^p h)[i] / (deg(i)+1).
    With normalized=False this is ego_step_raw bit-for-bit."""
    h = np.asarray(h, dtype=np.float64)
    acc = _ego_accumulate(g, h, cfg.p, normalized=cfg.normalized, report=report)
    return acc / (degrees(g).degrees + 1)[:, None]


def ego_operator(g: Graph, cfg: EgoLayerConfig = EgoLayerConfig()) -> SparseMatrix:
    """The fixed linear map of ego_step as one |V| x |V| sparse matrix:
    diag(1/(deg+1)) sum_j Ahat_j^p. Observationally identical to ego_step;
    used where the operator is applied many times (training)."""
    n = g.n
    acc = np.zeros((n, n))
    for j in range(n):
        members, block = ego_dense_block(g, j)
        if cfg.normalized:
            block = _normalize_block(block)
        bp = np.linalg.matrix_power(block, cfg.p) if cfg.p > 1 else block
        acc[np.ix_(members, members)] += bp
    acc /= (degrees(g).degrees + 1)[:, None]
    return SparseMatrix.from_dense(acc)


def gcn_operator(g: Graph, normalized: bool = True) -> SparseMatrix:
    """A+I, optionally with the usual symmetric degree normalization
    Dt^{-1/2}(A+I)Dt^{-1/2}."""
    n = g.n
    rows = np.repeat(np.arange(n, dtype=np.int64),
                     np.diff(g.adjacency.row_offsets))
    rows = np.concatenate([rows, np.arange(n, dtype=np.int64)])
    cols = np.concatenate([g.adjacency.col_indices, np.arange(n, dtype=np.int64)])
    a_loop = SparseMatrix.from_coo(n, n, rows, cols, np.ones(len(rows)))
    if not normalized:
        return a_loop
    from .sparse import normalize_sym
    return normalize_sym(a_loop)


def gcn_step(g: Graph, h, w=None, normalized: bool = True):
    """One round of standard propagation: Abar h (then h w if weights given).
    The unnormalized variant is plain (A+I) h."""
    h = np.asarray(h, dtype=np.float64)
    if h.shape[0] != g.n:
        raise ValueError("h must have one row per node")
    out = spmm(gcn_operator(g, normalized), h)
    if w is not None:
        w = np.asarray(w, dtype=np.float64)
        if w.shape[0] != out.shape[1]:
            raise ValueError(
                f"weight shape {w.shape} incompatible with features of width {out.shape[1]}")
        out = out @ w
    return out


def interleaved_forward(g: Graph, x, schedule, weights=None,
                        report: PropagationReport | None = None):
    """Apply ego and gcn layers in order. Weighted gcn layers apply ReLU,
    except the last weighted layer (linear readout). Ego layers are
    parameter-free."""
    if not schedule:
        raise ValueError("schedule must be non-empty")
    h = np.asarray(x, dtype=np.float64)
    if h.ndim != 2 or h.shape[1] == 0:
        raise ValueError("features must be a non-empty 2-D matrix")
    weights = list(weights) if weights is not None else []
    weighted = [idx for idx, layer in enumerate(schedule)
                if isinstance(layer, GcnLayerConfig) and layer.out_dim is not None]
    if len(weighted) != len(weights):
        raise ValueError(
            f"schedule has {len(weighted)} weighted layers but {len(weights)} weight matrices given")
    w_iter = iter(weights)
    for idx, layer in enumerate(schedule):
        try:
            if isinstance(layer, EgoLayerConfig):
                h = ego_step(g, h, layer, report=report)
            elif isinstance(layer, GcnLayerConfig):
                if layer.out_dim is None:
                    h = gcn_step(g, h, normalized=layer.normalized)
                else:
                    h = gcn_step(g, h, next(w_iter), normalized=layer.normalized)
                    if idx != weighted[-1]:
                        h = np.maximum(h, 0.0)
            else:
                raise TypeError(f"unknown layer type {type(layer).__name__}")
        except ValueError as e:
            raise ValueError(f"layer {idx}: {e}") from e
    return h
