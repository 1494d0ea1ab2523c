import numpy as np
import pytest

from conftest import edgeless
from egognn.graph import Graph
from egognn.propagation import EgoLayerConfig, GcnLayerConfig
from egognn.sbm import generate_er, stratified_split
from egognn.training import (ModelParams, TrainConfig, TrainReport, forward,
                             init_params, load_params, loss_and_grad,
                             save_params, train)

SCHEDULES = {
    "gcn-gcn": [GcnLayerConfig(out_dim=5), GcnLayerConfig(out_dim=3)],
    "ego-gcn": [EgoLayerConfig(), GcnLayerConfig(out_dim=3)],
    "gcn-ego": [GcnLayerConfig(out_dim=3), EgoLayerConfig()],
    "ego-gcn-ego-gcn": [EgoLayerConfig(), GcnLayerConfig(out_dim=5),
                        EgoLayerConfig(), GcnLayerConfig(out_dim=3)],
}


def finite_difference_grads(g, x, labels, mask, schedule, params, eps=1e-5):
    grads = []
    for wi, w in enumerate(params.weights):
        grad = np.zeros_like(w)
        for idx in np.ndindex(w.shape):
            for sign in (+1, -1):
                ws = [v.copy() for v in params.weights]
                ws[wi][idx] += sign * eps
                loss, _ = loss_and_grad(g, x, labels, mask, schedule,
                                        ModelParams(tuple(ws)))
                grad[idx] += sign * loss
        grads.append(grad / (2 * eps))
    return grads


class TestForward:
    def test_all_zero_weights_zero_logits(self, c6):
        schedule = SCHEDULES["ego-gcn"]
        params = ModelParams((np.zeros((3, 3)),))
        out = forward(c6, np.ones((6, 3)), schedule, params)
        assert np.array_equal(out, np.zeros((6, 3)))

    def test_reduces_to_plain_gcn_without_ego_layers(self):
        g = generate_er(10, 0.4, 17)
        x = np.random.default_rng(0).random((10, 4))
        full = [EgoLayerConfig(), GcnLayerConfig(out_dim=6),
                EgoLayerConfig(), GcnLayerConfig(out_dim=2)]
        plain = [l for l in full if isinstance(l, GcnLayerConfig)]
        params = init_params(plain, 4, seed=1)
        # applying the plain schedule through the shared code path is exactly
        # a 2-layer GCN forward
        got = forward(g, x, plain, params)
        from egognn.propagation import gcn_step
        h = np.maximum(gcn_step(g, x, params.weights[0]), 0.0)
        want = gcn_step(g, h, params.weights[1])
        np.testing.assert_allclose(got, want, atol=1e-12)

    def test_single_node_ego_then_readout(self):
        g = edgeless(1)
        x = np.array([[2.0, -1.0]])
        w = np.array([[1.0, 0.5], [0.0, 2.0]])
        schedule = [EgoLayerConfig(), GcnLayerConfig(out_dim=2)]
        out = forward(g, x, schedule, ModelParams((w,)))
        np.testing.assert_allclose(out, x @ w, atol=1e-12)

    def test_param_count_independent_of_ego_layers(self):
        with_ego = init_params(SCHEDULES["ego-gcn-ego-gcn"], 4, seed=0)
        without = init_params([GcnLayerConfig(out_dim=5),
                               GcnLayerConfig(out_dim=3)], 4, seed=0)
        assert all(a.shape == b.shape
                   for a, b in zip(with_ego.weights, without.weights))


class TestLossAndGrad:
    def test_uniform_logits_loss_is_ln_c(self, c6):
        schedule = [GcnLayerConfig(out_dim=4)]
        params = ModelParams((np.zeros((3, 4)),))
        labels = np.array([0, 1, 2, 3, 0, 1])
        mask = np.ones(6, dtype=bool)
        loss, _ = loss_and_grad(c6, np.ones((6, 3)), labels, mask, schedule, params)
        assert abs(loss - np.log(4)) < 1e-12

    def test_empty_mask_rejected(self, c6):
        schedule = [GcnLayerConfig(out_dim=2)]
        params = init_params(schedule, 3, 0)
        with pytest.raises(ValueError):
            loss_and_grad(c6, np.ones((6, 3)), np.zeros(6, dtype=int),
                          np.zeros(6, dtype=bool), schedule, params)

    @pytest.mark.parametrize("name", list(SCHEDULES))
    @pytest.mark.parametrize("seed", range(10))
    def test_gradients_match_finite_differences(self, name, seed):
        rng = np.random.default_rng(seed)
        g = generate_er(8, 0.4, seed + 200)
        x = rng.random((8, 4 if name == "gcn-gcn" else 3))
        # gcn-ego ends without weights; give every schedule an input width
        # matching its first weighted layer
        schedule = SCHEDULES[name]
        f_in = x.shape[1]
        params = init_params(schedule, f_in, seed)
        labels = rng.integers(0, 3, size=8)
        mask = rng.random(8) < 0.7
        if not mask.any():
            mask[0] = True
        _, grads = loss_and_grad(g, x, labels, mask, schedule, params)
        fd = finite_difference_grads(g, x, labels, mask, schedule, params)
        for a, b in zip(grads, fd):
            denom = np.maximum(np.abs(b), 1e-3)
            assert np.max(np.abs(a - b) / denom) < 1e-5

    def test_satisfied_labels_give_small_readout_grads(self):
        # confident, correct logits: readout gradient nearly vanishes
        g = edgeless(4)
        x = np.eye(4)[:, :2] * 50.0
        schedule = [GcnLayerConfig(out_dim=2)]
        params = ModelParams((np.eye(2),))
        labels = np.array([0, 1, 1, 1])
        mask = np.ones(4, dtype=bool)
        _, grads = loss_and_grad(g, x, labels, mask, schedule, params)
        assert np.max(np.abs(grads[0])) < 1e-6


class TestTrain:
    def _separable_instance(self, seed=0):
        rng = np.random.default_rng(seed)
        n = 30
        labels = np.arange(n) % 2
        # separable by a hyperplane through the origin (the model has no bias)
        x = rng.normal(size=(n, 2)) + (2 * labels - 1)[:, None] * 4.0
        g = Graph.from_edges(n, [])
        return g, x, labels

    def test_logistic_regression_sanity(self):
        g, x, labels = self._separable_instance()
        schedule = [GcnLayerConfig(out_dim=2)]
        masks = (np.ones(g.n, dtype=bool),) * 3
        params, report = train(g, x, labels, masks, schedule,
                               TrainConfig(epochs=200, patience=200,
                                           learning_rate=0.5, weight_decay=0.0))
        logits = forward(g, x, schedule, params)
        acc = np.mean(logits.argmax(axis=1) == labels)
        assert acc == 1.0

    def test_lr_zero_keeps_params(self):
        g, x, labels = self._separable_instance()
        schedule = [GcnLayerConfig(out_dim=2)]
        masks = (np.ones(g.n, dtype=bool),) * 3
        cfg = TrainConfig(epochs=10, patience=100, learning_rate=0.0, seed=3)
        params, report = train(g, x, labels, masks, schedule, cfg)
        assert np.array_equal(params.weights[0], init_params(schedule, 2, 3).weights[0])
        assert len(set(np.round(report.train_loss, 12))) == 1  # flat

    def test_deterministic_given_seed(self):
        g = generate_er(12, 0.4, 77)
        rng = np.random.default_rng(5)
        x = rng.random((12, 3))
        labels = rng.integers(0, 2, size=12)
        masks = stratified_split(labels, seed=8)
        schedule = SCHEDULES["ego-gcn"]
        cfg = TrainConfig(epochs=30, patience=30, seed=4)
        _, r1 = train(g, x, labels, masks, schedule, cfg)
        _, r2 = train(g, x, labels, masks, schedule, cfg)
        assert r1.train_loss == r2.train_loss
        assert r1.val_accuracy == r2.val_accuracy
        assert r1.test_accuracy == r2.test_accuracy

    def test_loss_non_increasing_first_epoch_small_lr(self):
        g, x, labels = self._separable_instance(1)
        schedule = [GcnLayerConfig(out_dim=2)]
        masks = (np.ones(g.n, dtype=bool),) * 3
        cfg = TrainConfig(epochs=2, patience=10, learning_rate=1e-4)
        _, report = train(g, x, labels, masks, schedule, cfg)
        assert report.train_loss[1] <= report.train_loss[0]

    def test_disconnected_blocks_perfect_ego_accuracy(self):
        from egognn.sbm import SbmConfig, generate_sbm, model_schedule
        g = generate_sbm(SbmConfig((20, 20), 1.0, 0.0, seed=6))
        masks = stratified_split(g.labels, seed=2)
        schedule = model_schedule("ego_gnn", 2, 8, 2)
        params, report = train(g, g.features, g.labels, masks, schedule,
                               TrainConfig(epochs=200, patience=200,
                                           learning_rate=0.3))
        assert report.test_accuracy == 1.0

    def test_params_round_trip(self, tmp_path):
        schedule = SCHEDULES["ego-gcn"]
        params = init_params(schedule, 3, seed=9)
        cfg = TrainConfig()
        path = str(tmp_path / "params.json")
        save_params(path, schedule, params, cfg)
        s2, p2, c2 = load_params(path)
        assert s2 == schedule
        assert all(np.array_equal(a, b) for a, b in zip(p2.weights, params.weights))
        assert c2 == cfg
