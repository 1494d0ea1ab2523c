"""Ego-graph message passing on sparse graphs.

Propagation over every node's ego-graph, realized three equivalent ways
(supra-adjacency reference, tiled intra/inter sequencing, memory-efficient
iterative sum), plus expressiveness tests, spectral interlacing checks, and
a synthetic over-smoothing experiment harness.
"""

from .graph import DegreeVector, EgoGraph, Graph, degrees, extract_ego, load_graph, save_graph
from .kernels import IMPL as kernel_impl
from .propagation import (EgoLayerConfig, GcnLayerConfig, PropagationReport,
                          ego_step, ego_step_raw, gcn_step, interleaved_forward)
from .sparse import SparseMatrix, normalize_sym, spmm

__all__ = [
    "DegreeVector", "EgoGraph", "EgoLayerConfig", "GcnLayerConfig", "Graph",
    "PropagationReport", "SparseMatrix", "degrees", "ego_step", "ego_step_raw",
    "extract_ego", "gcn_step", "interleaved_forward", "kernel_impl",
    "load_graph", "normalize_sym", "save_graph", "spmm",
]

__version__ = "0.1.0"
