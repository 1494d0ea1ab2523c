"""Stochastic block model generation and the over-smoothing sweep.

Edge sets are bit-exact reproducible: pairs (u, v), u < v, are visited in
lexicographic order and each draws one uniform from a xoshiro256** stream
seeded from the config seed. Feature corruption and the train/val/test split
use separately derived streams (see rng.derive_seed).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Graph
from .rng import Xoshiro256StarStar, derive_seed

FEATURE_FLIP_PROB = 0.3

DEFAULT_BLOCKS = (100, 100, 100)
DEFAULT_P_INTRA = 0.3
DEFAULT_P_INTER_GRID = tuple(round(0.01 * k, 2) for k in range(1, 16))
DEFAULT_DEPTH = 4
DEFAULT_SEEDS = (0, 1, 2, 3, 4)


@dataclass(frozen=True)
class SbmConfig:
    block_sizes: tuple
    p_intra: float
    p_inter: float
    seed: int

    def __post_init__(self):
        if len(self.block_sizes) < 2 or any(b < 1 for b in self.block_sizes):
            raise ValueError("need at least 2 non-empty blocks")
        if sum(self.block_sizes) < 2:
            raise ValueError("need at least 2 nodes")
        for p in (self.p_intra, self.p_inter):
            if not (0.0 <= p <= 1.0):
                raise ValueError(f"probability {p} outside [0, 1]")


@dataclass(frozen=True)
class SweepRow:
    p_inter: float
    model: str
    seed: int
    accuracy: float
    failed: bool = False


@dataclass(frozen=True)
class SweepResult:
    rows: tuple


def generate_sbm(cfg: SbmConfig) -> Graph:
    """Labels are block indices; features are one-hot block indicators with
    each row flipped to a uniformly random block w.p. 0.3 (seeded)."""
    n = sum(cfg.block_sizes)
    k = len(cfg.block_sizes)
    block_of = np.repeat(np.arange(k), cfg.block_sizes)

    edge_rng = Xoshiro256StarStar(derive_seed(cfg.seed, 0))
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            p = cfg.p_intra if block_of[u] == block_of[v] else cfg.p_inter
            if edge_rng.random() < p:
                edges.append((u, v))

    feat_rng = Xoshiro256StarStar(derive_seed(cfg.seed, 1))
    feat_block = block_of.copy()
    for i in range(n):
        if feat_rng.random() < FEATURE_FLIP_PROB:
            feat_block[i] = feat_rng.below(k)
    features = np.zeros((n, k))
    features[np.arange(n), feat_block] = 1.0

    return Graph.from_edges(n, edges, features=features, labels=block_of)


def generate_er(n, p_edge, seed) -> Graph:
    """Erdos-Renyi G(n, p) with the same pair ordering and stream discipline
    as generate_sbm."""
    rng = Xoshiro256StarStar(derive_seed(seed, 0))
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)
             if rng.random() < p_edge]
    return Graph.from_edges(n, edges)


def stratified_split(labels, seed, fractions=(0.6, 0.2, 0.2)):
    """Per-class 60/20/20 split; returns boolean (train, val, test) masks.
    Proportions hold within +-1 node per block."""
    labels = np.asarray(labels)
    n = len(labels)
    rng = Xoshiro256StarStar(seed)
    masks = [np.zeros(n, dtype=bool) for _ in fractions]
    for c in np.unique(labels):
        idx = list(np.flatnonzero(labels == c))
        # Fisher-Yates with the shared stream
        for i in range(len(idx) - 1, 0, -1):
            j = rng.below(i + 1)
            idx[i], idx[j] = idx[j], idx[i]
        n_train = round(fractions[0] * len(idx))
        n_val = round(fractions[1] * len(idx))
        masks[0][idx[:n_train]] = True
        masks[1][idx[n_train:n_train + n_val]] = True
        masks[2][idx[n_train + n_val:]] = True
    return tuple(masks)


def model_schedule(model: str, depth: int, hidden: int, n_classes: int):
    """gcn: depth weighted GCN layers. ego_gnn: depth total layers, ego and
    weighted gcn alternating (ego, gcn, ego, gcn, ...)."""
    from .propagation import EgoLayerConfig, GcnLayerConfig

    if model == "gcn":
        dims = [hidden] * (depth - 1) + [n_classes]
        return [GcnLayerConfig(normalized=True, out_dim=d) for d in dims]
    if model == "ego_gnn":
        if depth % 2:
            raise ValueError("ego_gnn depth must be even (alternating layers)")
        dims = [hidden] * (depth // 2 - 1) + [n_classes]
        schedule = []
        for d in dims:
            schedule.append(EgoLayerConfig(p=1, normalized=True))
            schedule.append(GcnLayerConfig(normalized=True, out_dim=d))
        return schedule
    raise ValueError(f"unknown model {model!r}")


def oversmoothing_sweep(block_sizes=DEFAULT_BLOCKS, p_intra=DEFAULT_P_INTRA,
                        p_inter_grid=DEFAULT_P_INTER_GRID,
                        models=("gcn", "ego_gnn"), depth=DEFAULT_DEPTH,
                        seeds=DEFAULT_SEEDS, hidden=16,
                        train_config=None) -> SweepResult:
    """Full-grid sweep: per (p_inter, seed), generate one SBM graph and train
    every model on the same graph/split. Training failures are recorded as
    failed rows, never raised."""
    from dataclasses import replace

    from .training import TrainConfig, TrainingDivergence, train

    if depth < 2:
        raise ValueError("depth must be >= 2")
    if train_config is None:
        # hotter than the module default: depth-4 models need it to escape
        # the initial plateau under plain gradient descent
        train_config = TrainConfig(learning_rate=0.3, epochs=400, patience=150)
    n_classes = len(block_sizes)
    rows = []
    for cell, p_inter in enumerate(p_inter_grid):
        for seed in seeds:
            cfg = SbmConfig(tuple(block_sizes), p_intra, p_inter,
                            seed=derive_seed(seed, cell))
            g = generate_sbm(cfg)
            splits = stratified_split(g.labels, derive_seed(seed, cell, 1))
            run_cfg = replace(train_config, seed=derive_seed(seed, cell, 2))
            for model in models:
                schedule = model_schedule(model, depth, hidden, n_classes)
                try:
                    _, report = train(g, g.features, g.labels, splits,
                                      schedule, run_cfg)
                    rows.append(SweepRow(p_inter, model, seed,
                                         report.test_accuracy))
                except TrainingDivergence:
                    rows.append(SweepRow(p_inter, model, seed, 0.0, failed=True))
    return SweepResult(tuple(rows))


def sweep_to_csv_rows(result: SweepResult):
    yield "p_inter,model,seed,accuracy,failed"
    for r in result.rows:
        yield f"{r.p_inter},{r.model},{r.seed},{r.accuracy},{str(r.failed).lower()}"
