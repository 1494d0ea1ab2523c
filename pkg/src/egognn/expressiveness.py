"""1-WL color refinement, ego-based graph discrimination, and triangle
counting from ego-graph degrees."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .graph import Graph, degrees, ego_members
from .propagation import EgoLayerConfig, GcnLayerConfig, interleaved_forward

EGO_SIGNATURE_TOL = 1e-9


@dataclass(frozen=True)
class ColorState:
    colors: tuple          # canonical color per node
    round: int
    history: tuple         # per-round sorted color multisets


@dataclass(frozen=True)
class GraphSignature:
    value: np.ndarray

    def __post_init__(self):
        self.value.flags.writeable = False


def _canonicalize(signatures):
    # dense ids by first appearance in node order; collision-free, no hashing
    table = {}
    out = []
    for sig in signatures:
        if sig not in table:
            table[sig] = len(table)
        out.append(table[sig])
    return out


def _refine_colors(neighbor_lists, max_rounds):
    n = len(neighbor_lists)
    colors = [0] * n
    history = [tuple(sorted(Counter(colors).items()))]
    rounds = 0
    for _ in range(max_rounds):
        sigs = [(colors[i], tuple(sorted(colors[j] for j in neighbor_lists[i])))
                for i in range(n)]
        new = _canonicalize(sigs)
        rounds += 1
        history.append(tuple(sorted(Counter(new).items())))
        if new == colors:
            break
        colors = new
    return colors, rounds, history


def wl_refine(g: Graph, max_rounds: int | None = None) -> ColorState:
    """Classic 1-WL refinement from uniform initial colors, canonical
    relabeling each round, stopping at stability or max_rounds."""
    if max_rounds is None:
        max_rounds = max(g.n, 1)
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    nbrs = [list(map(int, g.neighbors(i))) for i in range(g.n)]
    colors, rounds, history = _refine_colors(nbrs, max_rounds)
    return ColorState(tuple(colors), rounds, tuple(history))


def wl_colors_joint(g1: Graph, g2: Graph):
    """Refine the disjoint union of g1 and g2 so colors are comparable
    across the two graphs."""
    nbrs = [list(map(int, g1.neighbors(i))) for i in range(g1.n)]
    nbrs += [[int(j) + g1.n for j in g2.neighbors(i)] for i in range(g2.n)]
    colors, _, _ = _refine_colors(nbrs, max_rounds=max(g1.n + g2.n, 1))
    return colors[:g1.n], colors[g1.n:]

def wl_signature(g1: Graph, g2: Graph):
    c1, c2 = wl_colors_joint(g1, g2)
    return sorted(c1), sorted(c2)


def wl_distinguish(g1: Graph, g2: Graph) -> bool:
    """True iff stable 1-WL color multisets differ (joint refinement)."""
    c1, c2 = wl_colors_joint(g1, g2)
    return Counter(c1) != Counter(c2)


DEFAULT_DISTINGUISH_SCHEDULE = (
    EgoLayerConfig(p=1, normalized=False),
    GcnLayerConfig(normalized=False),
)


def graph_signature(g: Graph, schedule=DEFAULT_DISTINGUISH_SCHEDULE) -> GraphSignature:
    """Mean of final node representations under constant [1,1,1] inputs."""
    x = np.ones((g.n, 3))
    h = interleaved_forward(g, x, list(schedule))
    return GraphSignature(h.mean(axis=0))


def ego_distinguish(g1: Graph, g2: Graph,
                    schedule=DEFAULT_DISTINGUISH_SCHEDULE) -> bool:
    s1 = graph_signature(g1, schedule).value
    s2 = graph_signature(g2, schedule).value
    if s1.shape != s2.shape:
        return True
    return bool(np.max(np.abs(s1 - s2)) > EGO_SIGNATURE_TOL)


def triangles_at(g: Graph, i) -> int:
    """Triangles through node i, from ego-graph degrees (exact integers).

    Within ego(i) every member row sums (with self-loop) to
    1 + [edge to center] + edges to other neighbors, so the edges among
    N(i) are sum over neighbors of (ego row degree - 2), halved.
    """
    members = ego_members(g, i)
    member_set = set(map(int, members))
    total = 0
    for u in members:
        u = int(u)
        if u == i:
            continue
        cols, _ = g.adjacency.row(u)
        row_deg = 1 + sum(1 for c in map(int, cols) if c in member_set)
        total += row_deg - 2
    assert total % 2 == 0
    return total // 2


def triangles_total(g: Graph) -> int:
    total = sum(triangles_at(g, i) for i in range(g.n))
    assert total % 3 == 0
    return total // 3


def triangle_oracle(g: Graph) -> int:
    """Independent brute-force count of triples u<v<w pairwise adjacent."""
    if g.n > 2000:
        raise ValueError("triangle_oracle capped at |V| <= 2000")
    count = 0
    for u in range(g.n):
        nu = g.neighbors(u)
        nu = nu[nu > u]
        for v in map(int, nu):
            nv = g.neighbors(v)
            # w > v adjacent to both u and v
            count += len(np.intersect1d(nu[nu > v], nv[nv > v]))
    return count
