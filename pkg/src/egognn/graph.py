"""Undirected simple graphs, degree bookkeeping, and ego-graph extraction.

Base-graph storage forbids self-loops and multi-edges; self-loops are added
by the operations that need them (ego extraction, GCN propagation), never
stored here.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass

import numpy as np

from .sparse import SparseMatrix


class GraphError(ValueError):
    pass


class GraphFormatError(GraphError):
    """Malformed graph file; message carries line/field diagnostics."""


@dataclass(frozen=True)
class Graph:
    n: int
    adjacency: SparseMatrix  # symmetric, zero diagonal, unit weights
    features: np.ndarray | None = None  # |V| x f float64
    labels: np.ndarray | None = None    # |V| int64

    def __post_init__(self):
        for arr in (self.features, self.labels):
            if arr is not None:
                arr.flags.writeable = False

    @staticmethod
    def from_edges(n, edges, features=None, labels=None) -> "Graph":
        """Build from an undirected edge list (each pair once, u != v)."""
        rows, cols = [], []
        seen = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"self-loop [{u},{v}] not allowed")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge [{u},{v}] out of range for n={n}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphError(f"duplicate edge [{u},{v}]")
            seen.add(key)
            rows += [u, v]
            cols += [v, u]
        adj = SparseMatrix.from_coo(n, n, rows, cols, np.ones(len(rows)))
        if features is not None:
            features = np.ascontiguousarray(features, dtype=np.float64)
            if features.shape[0] != n:
                raise GraphError("features must have one row per node")
        if labels is not None:
            labels = np.asarray(labels, dtype=np.int64)
            if labels.shape != (n,):
                raise GraphError("labels must have one entry per node")
        return Graph(n, adj, features, labels)

    def neighbors(self, i) -> np.ndarray:
        cols, _ = self.adjacency.row(i)
        return cols

    def edges(self):
        """Undirected edge list, each pair once with u < v."""
        out = []
        for u in range(self.n):
            for v in self.neighbors(u):
                if u < v:
                    out.append((u, int(v)))
        return out

    def relabel(self, perm) -> "Graph":
        """Apply node permutation: new id of node i is perm[i]."""
        perm = np.asarray(perm, dtype=np.int64)
        edges = [(perm[u], perm[v]) for u, v in self.edges()]
        inv = np.empty_like(perm)
        inv[perm] = np.arange(self.n)
        feats = self.features[inv] if self.features is not None else None
        labels = self.labels[inv] if self.labels is not None else None
        return Graph.from_edges(self.n, edges, feats, labels)


@dataclass(frozen=True)
class EgoGraph:
    """Induced subgraph on a node and its neighbors, self-loops on every
    member, stored at full |V| x |V| dimension."""

    center: int
    members: np.ndarray  # sorted ascending, = {center} U N(center)
    adjacency: SparseMatrix


@dataclass(frozen=True)
class DegreeVector:
    degrees: np.ndarray  # int64, self-loops excluded (none stored anyway)


def degrees(g: Graph) -> DegreeVector:
    return DegreeVector(np.diff(g.adjacency.row_offsets).astype(np.int64))


def ego_members(g: Graph, i) -> np.ndarray:
    """Sorted member set {i} U N(i)."""
    if not (0 <= i < g.n):
        raise GraphError(f"node id {i} out of range for n={g.n}")
    nbrs = g.neighbors(i)
    pos = np.searchsorted(nbrs, i)
    return np.insert(nbrs, pos, i)


def ego_dense_block(g: Graph, i):
    """(members, k x k dense block) of the i-th ego-graph, self-loops included.

    The compact block is an internal optimization; extract_ego scatters it
    back to full dimension.
    """
    members = ego_members(g, i)
    k = len(members)
    block = np.eye(k)
    for a, u in enumerate(members):
        cols, _ = g.adjacency.row(int(u))
        hit = np.searchsorted(members, cols)
        ok = (hit < k) & (members[np.minimum(hit, k - 1)] == cols)
        block[a, hit[ok]] = 1.0
    return members, block


def extract_ego(g: Graph, i) -> EgoGraph:
    """Induced subgraph on {i} U N(i) with self-loops on all members."""
    members, block = ego_dense_block(g, i)
    br, bc = np.nonzero(block)
    adj = SparseMatrix.from_coo(g.n, g.n, members[br], members[bc],
                                block[br, bc])
    return EgoGraph(int(i), members, adj)


# -- file formats ----------------------------------------------------------
#
# JSON: {"n": int, "edges": [[u,v],...], "features": [[...],...]?, "labels": [...]?}
#       edges undirected, listed once each, u < v required.
# TSV:  first line "# n=<int>", then one "u<TAB>v" per line; features/labels
#       in sibling CSV files <stem>.features.csv / <stem>.labels.csv.


def _sibling_paths(path):
    stem, _ = os.path.splitext(path)
    return stem + ".features.csv", stem + ".labels.csv"


def load_graph(path, format=None) -> Graph:
    if format is None:
        format = "json" if str(path).endswith(".json") else "tsv"
    if format == "json":
        return _load_json(path)
    if format == "tsv":
        return _load_tsv(path)
    raise GraphFormatError(f"unknown graph format {format!r}")


def save_graph(g: Graph, path, format=None):
    if format is None:
        format = "json" if str(path).endswith(".json") else "tsv"
    if format == "json":
        doc = {"n": g.n, "edges": [[u, v] for u, v in g.edges()]}
        if g.features is not None:
            doc["features"] = g.features.tolist()
        if g.labels is not None:
            doc["labels"] = g.labels.tolist()
        with open(path, "w") as fh:
            json.dump(doc, fh)
    elif format == "tsv":
        with open(path, "w") as fh:
            fh.write(f"# n={g.n}\n")
            for u, v in g.edges():
                fh.write(f"{u}\t{v}\n")
        fpath, lpath = _sibling_paths(path)
        if g.features is not None:
            with open(fpath, "w", newline="") as fh:
                csv.writer(fh).writerows(g.features.tolist())
        if g.labels is not None:
            with open(lpath, "w", newline="") as fh:
                csv.writer(fh).writerows([[int(x)] for x in g.labels])
    else:
        raise GraphFormatError(f"unknown graph format {format!r}")


def _load_json(path) -> Graph:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise GraphFormatError(f"{path}: invalid JSON: {e}") from e
    if not isinstance(doc, dict) or "n" not in doc or "edges" not in doc:
        raise GraphFormatError(f"{path}: expected object with 'n' and 'edges'")
    n = doc["n"]
    if not isinstance(n, int) or n < 0:
        raise GraphFormatError(f"{path}: field 'n' must be a non-negative integer")
    edges = doc["edges"]
    for idx, e in enumerate(edges):
        if (not isinstance(e, list) or len(e) != 2
                or not all(isinstance(x, int) for x in e)):
            raise GraphFormatError(f"{path}: edge #{idx} must be a pair of ints")
        if e[0] >= e[1]:
            raise GraphFormatError(
                f"{path}: edge #{idx} = {e} violates u < v (self-loops forbidden)")
    try:
        return Graph.from_edges(n, edges, doc.get("features"), doc.get("labels"))
    except GraphError as e:
        raise GraphFormatError(f"{path}: {e}") from e


def _load_tsv(path) -> Graph:
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("# n="):
        raise GraphFormatError(f"{path}:1: expected header '# n=<int>'")
    try:
        n = int(lines[0][4:])
    except ValueError as e:
        raise GraphFormatError(f"{path}:1: bad node count in header") from e
    edges = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise GraphFormatError(f"{path}:{lineno}: expected 'u<TAB>v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as e:
            raise GraphFormatError(f"{path}:{lineno}: non-integer node id") from e
        edges.append((u, v))
    fpath, lpath = _sibling_paths(path)
    features = labels = None
    if os.path.exists(fpath):
        with open(fpath) as fh:
            features = [[float(x) for x in row] for row in csv.reader(fh) if row]
    if os.path.exists(lpath):
        with open(lpath) as fh:
            labels = [int(row[0]) for row in csv.reader(fh) if row]
    try:
        return Graph.from_edges(n, edges, features, labels)
    except GraphError as e:
        raise GraphFormatError(f"{path}: {e}") from e
