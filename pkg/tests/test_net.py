import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from gols.net import Network, sigmoid


def forward_oracle(net, params, row):
    """Straight-line per-sample re-implementation of the forward pass."""
    a = list(row)
    for w in net.unpack(params):
        nxt = []
        for j in range(w.shape[0]):
            z = w[j, 0] + sum(w[j, 1 + i] * a[i] for i in range(len(a)))
            nxt.append(1.0 / (1.0 + math.exp(-z)))
        a = nxt
    return np.array(a)


def loss_oracle(net, params, inputs, targets):
    """Double loop over samples and outputs."""
    p, k = targets.shape
    total = 0.0
    for b in range(p):
        yhat = forward_oracle(net, params, inputs[b])
        for j in range(k):
            total += (yhat[j] - targets[b, j]) ** 2
    return 100.0 / (k * p) * total


def central_difference_gradient(net, params, inputs, targets, h=1e-6):
    grad = np.empty_like(params)
    for i in range(params.size):
        hi = params.copy()
        lo = params.copy()
        hi[i] += h
        lo[i] -= h
        grad[i] = (net.loss(hi, inputs, targets) - net.loss(lo, inputs, targets)) / (2 * h)
    return grad


class TestSigmoid:
    def test_zero_maps_to_half(self):
        assert sigmoid(np.array([0.0]))[0] == 0.5

    def test_extreme_inputs_stay_strictly_open(self):
        z = np.array([-1e6, -800.0, -40.0, 40.0, 800.0, 1e6])
        s = sigmoid(z)
        assert np.all(s > 0.0)
        assert np.all(s < 1.0)
        assert np.all(np.isfinite(s))

    def test_matches_naive_formula_in_safe_range(self):
        z = np.linspace(-30, 30, 101)
        assert_allclose(sigmoid(z), 1.0 / (1.0 + np.exp(-z)), rtol=1e-15)


class TestForward:
    def test_zero_weights_give_half_everywhere(self):
        net = Network(3, [4], 2)
        out = net.forward(np.zeros(net.num_params), np.random.default_rng(0).normal(size=(5, 3)))
        assert_allclose(out, 0.5)

    def test_zero_weights_two_hidden_layers(self):
        net = Network(3, [4, 4], 2)
        out = net.forward(np.zeros(net.num_params), np.ones((2, 3)))
        assert_allclose(out, 0.5)

    def test_zero_output_preactivation_gives_half(self):
        # 1-1-1 net: cancel the hidden activation (0.5 * w) with the bias.
        net = Network(1, [1], 1)
        w1 = np.array([[0.0, 0.0]])        # hidden activation is sigmoid(0) = 0.5
        w2 = np.array([[-1.0, 2.0]])       # output z = -1 + 2 * 0.5 = 0
        params = net.pack([w1, w2])
        out = net.forward(params, np.array([[3.7]]))
        assert out[0, 0] == 0.5

    def test_matches_per_sample_oracle(self):
        net = Network(4, [3], 3)
        rng = np.random.default_rng(7)
        params = rng.uniform(-1, 1, net.num_params)
        x = rng.normal(size=(1, 4))
        assert_allclose(net.forward(params, x)[0], forward_oracle(net, params, x[0]), atol=1e-12)

    def test_matches_oracle_two_hidden(self):
        net = Network(4, [3, 5], 2)
        rng = np.random.default_rng(8)
        params = rng.uniform(-1, 1, net.num_params)
        x = rng.normal(size=(6, 4))
        for row, got in zip(x, net.forward(params, x)):
            assert_allclose(got, forward_oracle(net, params, row), atol=1e-12)

    def test_shape_mismatch_raises(self):
        net = Network(4, [3], 3)
        with pytest.raises(ValueError):
            net.forward(np.zeros(net.num_params), np.zeros((2, 5)))
        with pytest.raises(ValueError):
            net.forward(np.zeros(net.num_params + 1), np.zeros((2, 4)))

    def test_outputs_open_interval_for_huge_weights(self):
        net = Network(2, [3], 2)
        out = net.forward(np.full(net.num_params, 1e6), np.ones((4, 2)))
        assert np.all(out > 0.0) and np.all(out < 1.0)


class TestLoss:
    def test_perfect_prediction_is_zero(self):
        net = Network(2, [2], 2)
        rng = np.random.default_rng(3)
        params = rng.uniform(-0.5, 0.5, net.num_params)
        x = rng.normal(size=(4, 2))
        targets = net.forward(params, x)  # reachable targets by construction
        assert net.loss(params, x, targets) == 0.0

    def test_unit_residual_everywhere(self):
        # Every (prediction - target) entry equals 1 when targets sit one
        # below the prediction; with K=2, P=10 the loss is (100/20)*20 = 100.
        net = Network(2, [2], 2)
        params = np.zeros(net.num_params)  # predictions all 0.5
        x = np.zeros((10, 2))
        targets = np.full((10, 2), -0.5)
        assert net.loss(params, x, targets) == pytest.approx(100.0)

    def test_matches_double_loop_oracle(self):
        net = Network(3, [4, 2], 3)
        rng = np.random.default_rng(11)
        params = rng.uniform(-1, 1, net.num_params)
        x = rng.normal(size=(7, 3))
        y = rng.uniform(size=(7, 3))
        assert_allclose(net.loss(params, x, y), loss_oracle(net, params, x, y), rtol=1e-12)

    def test_row_permutation_invariance(self):
        net = Network(3, [4], 2)
        rng = np.random.default_rng(5)
        params = rng.uniform(-1, 1, net.num_params)
        x = rng.normal(size=(9, 3))
        y = rng.uniform(size=(9, 2))
        perm = rng.permutation(9)
        assert_allclose(net.loss(params, x, y), net.loss(params, x[perm], y[perm]), rtol=1e-12)

    def test_empty_batch_raises(self):
        net = Network(2, [2], 2)
        with pytest.raises(ValueError):
            net.loss(np.zeros(net.num_params), np.zeros((0, 2)), np.zeros((0, 2)))


class TestGradient:
    def test_zero_at_perfect_prediction(self):
        net = Network(2, [3], 2)
        rng = np.random.default_rng(9)
        params = rng.uniform(-0.5, 0.5, net.num_params)
        x = rng.normal(size=(5, 2))
        targets = net.forward(params, x)
        assert_allclose(net.gradient(params, x, targets), 0.0, atol=1e-15)

    @pytest.mark.parametrize("case", range(20))
    def test_matches_central_differences(self, case):
        rng = np.random.default_rng(1000 + case)
        d = int(rng.integers(2, 6))
        k = int(rng.integers(2, 5))
        layers = [int(rng.integers(2, 7)) for _ in range(int(rng.integers(1, 3)))]
        p = int(rng.integers(1, 17))
        net = Network(d, layers, k)
        params = rng.uniform(-0.5, 0.5, net.num_params)
        x = rng.normal(size=(p, d))
        y = rng.uniform(size=(p, k))
        analytic = net.gradient(params, x, y)
        numeric = central_difference_gradient(net, params, x, y)
        # atol floors the ~1e-9 roundoff of central differences at h=1e-6.
        assert_allclose(analytic, numeric, rtol=1e-6, atol=1e-6)

    def test_duplicated_rows_equal_single_row(self):
        net = Network(3, [4], 2)
        rng = np.random.default_rng(13)
        params = rng.uniform(-1, 1, net.num_params)
        x = rng.normal(size=(1, 3))
        y = rng.uniform(size=(1, 2))
        single = net.gradient(params, x, y)
        doubled = net.gradient(params, np.vstack([x, x]), np.vstack([y, y]))
        assert_allclose(doubled, single, rtol=1e-12)


class TestParameterLayout:
    @given(
        d=st.integers(1, 5),
        hidden=st.lists(st.integers(1, 6), min_size=1, max_size=2),
        k=st.integers(1, 4),
        seed=st.integers(0, 2**31),
    )
    @settings(max_examples=50, deadline=None)
    def test_pack_unpack_roundtrip(self, d, hidden, k, seed):
        net = Network(d, hidden, k)
        params = np.random.default_rng(seed).normal(size=net.num_params)
        assert np.array_equal(net.pack(net.unpack(params)), params)

    def test_layout_is_layer_major_row_major(self):
        net = Network(2, [2], 1)
        params = np.arange(net.num_params, dtype=float)
        w1, w2 = net.unpack(params)
        assert_allclose(w1, [[0, 1, 2], [3, 4, 5]])
        assert_allclose(w2, [[6, 7, 8]])

    def test_init_params_within_range_and_deterministic(self):
        net = Network(4, [3], 3)
        a = net.init_params(42)
        b = net.init_params(42)
        c = net.init_params(43)
        assert np.max(np.abs(a)) <= 0.1
        assert np.array_equal(a, b)
        assert np.any(a != c)

    @given(seed=st.integers(0, 2**31))
    @settings(max_examples=25, deadline=None)
    def test_init_params_range_property(self, seed):
        net = Network(3, [2, 2], 2)
        assert np.max(np.abs(net.init_params(seed))) <= 0.1

    @given(scale=st.floats(1e-3, 1e8), seed=st.integers(0, 2**31))
    @settings(max_examples=50, deadline=None)
    def test_forward_outputs_stay_strictly_open(self, scale, seed):
        net = Network(3, [4], 2)
        rng = np.random.default_rng(seed)
        params = scale * rng.normal(size=net.num_params)
        out = net.forward(params, rng.normal(size=(3, 3)))
        assert np.all(out > 0.0) and np.all(out < 1.0)
