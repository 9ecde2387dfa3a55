import numpy as np
import pytest

from core.errors import ShapeMismatch
from core.mlp import LayerGrad, build_specs, init_network
from core.optim import AdamState, adam_step


def _grads_like(net, fill=None, rng=None):
    out = []
    for layer in net.layers:
        if rng is not None:
            out.append(LayerGrad(rng.standard_normal(layer.weights.shape), rng.standard_normal(layer.bias.shape)))
        else:
            out.append(LayerGrad(np.full(layer.weights.shape, fill), np.full(layer.bias.shape, fill)))
    return out


def test_zero_gradient_leaves_parameters():
    net = init_network(build_specs([3, 4, 2]), seed=0)
    new, state = adam_step(net, _grads_like(net, 0.0), AdamState(lr=0.1))
    assert new.equals(net)
    assert state.t == 1


def test_first_step_moves_by_lr_times_sign(rng):
    net = init_network(build_specs([3, 4, 2]), seed=0)
    grads = _grads_like(net, rng=rng)
    new, _ = adam_step(net, grads, AdamState(lr=0.01))
    for old, upd, g in zip(net.layers, new.layers, grads):
        np.testing.assert_allclose(upd.weights - old.weights, -0.01 * np.sign(g.weights), rtol=1e-5)
        np.testing.assert_allclose(upd.bias - old.bias, -0.01 * np.sign(g.bias), rtol=1e-5)


def test_constant_gradient_moves_linearly():
    net = init_network(build_specs([2, 2]), seed=0)
    grads = _grads_like(net, 0.5)
    state = AdamState(lr=1e-3)
    cur = net
    for _ in range(200):
        cur, state = adam_step(cur, grads, state)
    np.testing.assert_allclose(cur.layers[0].weights - net.layers[0].weights,
                               np.full((2, 2), -0.2), rtol=1e-5)
    assert state.t == 200


def test_step_does_not_mutate_inputs(rng):
    net = init_network(build_specs([3, 2]), seed=1)
    before = net.copy()
    state = AdamState(lr=0.1)
    _, s1 = adam_step(net, _grads_like(net, rng=rng), state)
    assert net.equals(before)
    assert state.t == 0 and state.m == []

    snapshot = s1.copy()
    adam_step(net, _grads_like(net, rng=rng), s1)
    assert s1.t == snapshot.t
    assert all(np.array_equal(a[0], b[0]) for a, b in zip(s1.m, snapshot.m))


def test_same_sequence_same_result():
    net = init_network(build_specs([3, 4, 2]), seed=5)

    def run():
        rng = np.random.default_rng(77)
        cur, st = net, AdamState(lr=0.01)
        for _ in range(10):
            cur, st = adam_step(cur, _grads_like(cur, rng=rng), st)
        return cur

    assert run().equals(run())


def test_shape_mismatch():
    net = init_network(build_specs([3, 4, 2]), seed=0)
    other = init_network(build_specs([3, 5, 2]), seed=0)
    with pytest.raises(ShapeMismatch):
        adam_step(net, _grads_like(other, 1.0), AdamState(lr=0.1))
    with pytest.raises(ShapeMismatch):
        adam_step(net, _grads_like(net, 1.0)[:1], AdamState(lr=0.1))

    _, state = adam_step(other, _grads_like(other, 1.0), AdamState(lr=0.1))
    with pytest.raises(ShapeMismatch):
        adam_step(net, _grads_like(net, 1.0), state)


def test_permuting_entries_permutes_updates(rng):
    net = init_network(build_specs([3, 4]), seed=2)
    layer = net.layers[0]
    perm_w = rng.permutation(layer.weights.size)
    perm_b = rng.permutation(layer.bias.size)

    def permuted(w, b):
        return w.ravel()[perm_w].reshape(w.shape), b[perm_b]

    shuffled = net.copy()
    shuffled.layers[0].weights, shuffled.layers[0].bias = permuted(layer.weights, layer.bias)

    cur, st = net, AdamState(lr=0.01)
    cur_p, st_p = shuffled, AdamState(lr=0.01)
    for _ in range(5):
        g = _grads_like(cur, rng=rng)[0]
        gw, gb = permuted(g.weights, g.bias)
        cur, st = adam_step(cur, [g], st)
        cur_p, st_p = adam_step(cur_p, [LayerGrad(gw, gb)], st_p)

    expected_w, expected_b = permuted(cur.layers[0].weights, cur.layers[0].bias)
    np.testing.assert_array_equal(cur_p.layers[0].weights, expected_w)
    np.testing.assert_array_equal(cur_p.layers[0].bias, expected_b)
