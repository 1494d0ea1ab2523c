"""Trainable interleaved Ego-GNN/GCN node classifier.

The ego and GCN propagation operators are constant linear maps, so backprop
through them is application of the transposed operator; only the GCN weight
matrices and readout are trainable. Full-batch gradient descent with weight
decay; everything deterministic given the seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph
from .propagation import EgoLayerConfig, GcnLayerConfig, ego_operator, gcn_operator
from .sparse import SparseMatrix, spmm


class TrainingDivergence(RuntimeError):
    pass


@dataclass(frozen=True)
class ModelParams:
    weights: tuple  # one matrix per weighted gcn layer, readout last


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.05
    epochs: int = 300
    weight_decay: float = 5e-4
    seed: int = 0
    patience: int = 30

    def __post_init__(self):
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be >= 0")


@dataclass
class TrainReport:
    train_loss: list = field(default_factory=list)
    val_accuracy: list = field(default_factory=list)
    test_accuracy: float = 0.0
    epochs_run: int = 0


def _weighted_indices(schedule):
    return [i for i, layer in enumerate(schedule)
            if isinstance(layer, GcnLayerConfig) and layer.out_dim is not None]


def init_params(schedule, f_in, seed=0) -> ModelParams:
    """Glorot-uniform init for every weighted gcn layer, seeded."""
    rng = np.random.default_rng(seed)
    weights = []
    dim = f_in
    for i in _weighted_indices(schedule):
        out = schedule[i].out_dim
        limit = np.sqrt(6.0 / (dim + out))
        weights.append(rng.uniform(-limit, limit, size=(dim, out)))
        dim = out
    return ModelParams(tuple(weights))


class _Operators:
    """Per-graph cache of the fixed propagation operators and transposes."""

    def __init__(self, g: Graph):
        self.g = g
        self._cache = {}

    def get(self, layer) -> tuple[SparseMatrix, SparseMatrix]:
        if isinstance(layer, EgoLayerConfig):
            key = ("ego", layer.p, layer.normalized)
        else:
            key = ("gcn", layer.normalized)
        if key not in self._cache:
            if key[0] == "ego":
                op = ego_operator(self.g, layer)
            else:
                op = gcn_operator(self.g, layer.normalized)
            self._cache[key] = (op, op.transpose())
        return self._cache[key]


def _forward_cached(g, x, schedule, params, ops: _Operators):
    """Returns (logits, tape) where tape holds what backward needs."""
    weighted = _weighted_indices(schedule)
    if len(weighted) != len(params.weights):
        raise ValueError("params do not match schedule")
    h = np.ascontiguousarray(x, dtype=np.float64)
    if h.ndim != 2 or h.shape[1] == 0:
        raise ValueError("features must be a non-empty 2-D matrix")
    tape = []
    w_idx = 0
    for i, layer in enumerate(schedule):
        op, op_t = ops.get(layer)
        prop = spmm(op, h)
        if isinstance(layer, GcnLayerConfig) and layer.out_dim is not None:
            w = params.weights[w_idx]
            if w.shape[0] != prop.shape[1]:
                raise ValueError(
                    f"layer {i}: weight shape {w.shape} incompatible with width {prop.shape[1]}")
            z = prop @ w
            relu = i != weighted[-1]
            h = np.maximum(z, 0.0) if relu else z
            tape.append(("gcn_w", op_t, prop, z, relu, w_idx))
            w_idx += 1
        else:
            h = prop
            tape.append(("prop", op_t))
    return h, tape


def forward(g: Graph, x, schedule, params: ModelParams):
    """Logits |V| x C for the interleaved schedule."""
    ops = _Operators(g)
    logits, _ = _forward_cached(g, x, schedule, params, ops)
    return logits


def _softmax(z):
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def loss_and_grad(g, x, labels, mask, schedule, params, ops=None):
    """Masked mean softmax cross-entropy and exact analytic gradients."""
    loss, grads, _ = _loss_grad_logits(g, x, labels, mask, schedule, params, ops)
    return loss, grads


def _loss_grad_logits(g, x, labels, mask, schedule, params, ops=None):
    mask = np.asarray(mask, dtype=bool)
    m = int(mask.sum())
    if m == 0:
        raise ValueError("mask selects no nodes")
    if ops is None:
        ops = _Operators(g)
    logits, tape = _forward_cached(g, x, schedule, params, ops)
    labels = np.asarray(labels, dtype=np.int64)
    probs = _softmax(logits[mask])
    picked = probs[np.arange(m), labels[mask]]
    loss = float(-np.mean(np.log(np.maximum(picked, 1e-300))))

    dlogits = np.zeros_like(logits)
    d = probs.copy()
    d[np.arange(m), labels[mask]] -= 1.0
    dlogits[mask] = d / m

    grads = [None] * len(params.weights)
    dh = dlogits
    for entry in reversed(tape):
        if entry[0] == "gcn_w":
            _, op_t, prop, z, relu, w_idx = entry
            dz = dh * (z > 0) if relu else dh
            grads[w_idx] = prop.T @ dz
            dh = spmm(op_t, dz @ params.weights[w_idx].T)
        else:
            dh = spmm(entry[1], dh)
    return loss, grads, logits


def _accuracy(logits, labels, mask):
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        return 0.0
    pred = logits[mask].argmax(axis=1)
    return float(np.mean(pred == np.asarray(labels)[mask]))


def train(g: Graph, x, labels, splits, schedule, cfg: TrainConfig = TrainConfig()):
    """Full-batch GD with weight decay and early stopping on validation
    accuracy. Returns the best-validation parameters and a TrainReport."""
    train_mask, val_mask, test_mask = splits
    ops = _Operators(g)
    params = init_params(schedule, np.asarray(x).shape[1], cfg.seed)
    weights = [w.copy() for w in params.weights]
    report = TrainReport()
    best_val = -1.0
    best_loss = np.inf
    best_weights = [w.copy() for w in weights]
    stall = 0
    for epoch in range(cfg.epochs):
        p = ModelParams(tuple(weights))
        loss, grads, logits = _loss_grad_logits(g, x, labels, train_mask,
                                                schedule, p, ops)
        if not np.isfinite(loss):
            raise TrainingDivergence(f"non-finite loss at epoch {epoch}")
        val_acc = _accuracy(logits, labels, val_mask)
        report.train_loss.append(loss)
        report.val_accuracy.append(val_acc)
        report.epochs_run = epoch + 1
        # snapshot ties broken by train loss so a saturated validation set
        # does not freeze underfit weights
        if val_acc > best_val or (val_acc == best_val and loss < best_loss):
            best_weights = [w.copy() for w in weights]
            best_loss = loss
        if val_acc > best_val:
            best_val = val_acc
            stall = 0
        else:
            stall += 1
            if stall > cfg.patience:
                break
        for w, gr in zip(weights, grads):
            w -= cfg.learning_rate * (gr + cfg.weight_decay * w)
    final = ModelParams(tuple(best_weights))
    logits, _ = _forward_cached(g, x, schedule, final, ops)
    report.test_accuracy = _accuracy(logits, labels, test_mask)
    return final, report


# -- parameter persistence ---------------------------------------------------


def _layer_to_json(layer):
    if isinstance(layer, EgoLayerConfig):
        return {"type": "ego", "p": layer.p, "normalized": layer.normalized}
    return {"type": "gcn", "normalized": layer.normalized,
            "out_dim": layer.out_dim}


def _layer_from_json(doc):
    if doc["type"] == "ego":
        return EgoLayerConfig(p=doc["p"], normalized=doc["normalized"])
    return GcnLayerConfig(normalized=doc["normalized"], out_dim=doc["out_dim"])


def save_params(path, schedule, params: ModelParams, cfg: TrainConfig):
    doc = {
        "schedule": [_layer_to_json(l) for l in schedule],
        "weights": [w.tolist() for w in params.weights],
        "config": {"learning_rate": cfg.learning_rate, "epochs": cfg.epochs,
                   "weight_decay": cfg.weight_decay, "seed": cfg.seed,
                   "patience": cfg.patience},
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_params(path):
    with open(path) as fh:
        doc = json.load(fh)
    schedule = [_layer_from_json(l) for l in doc["schedule"]]
    params = ModelParams(tuple(np.asarray(w, dtype=np.float64)
                               for w in doc["weights"]))
    cfg = TrainConfig(**doc["config"])
    return schedule, params, cfg
