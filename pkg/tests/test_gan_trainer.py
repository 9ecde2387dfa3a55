import logging
from dataclasses import replace

import numpy as np
import pytest

from config import TrainConfig
from core.errors import BadSpec, DegenerateSample, EmptyDataset, NonFiniteLoss, ShapeMismatch
from core.losses import coral_loss
from training import gan_trainer
from training.gan_trainer import build_level, generate, minibatches, train_gan


@pytest.fixture
def toy_pairs(rng):
    C = rng.standard_normal((40, 3))
    A = np.array([[1.0, -0.5], [0.3, 2.0], [-1.2, 0.4]])
    return C, C @ A + np.array([0.5, -1.0])


def _level(cfg, cond_dim=3, sample_dim=2, which='low'):
    return build_level(which, cond_dim, sample_dim, cfg, 'desk')


def test_zero_iterations_returns_equal_networks(toy_pairs, quick_cfg):
    cfg = replace(quick_cfg, iterations=0)
    level = _level(cfg)
    trained, report = train_gan(level, *toy_pairs, cfg)
    assert trained.generator.equals(level.generator)
    assert trained.discriminator.equals(level.discriminator)
    assert report.records == []
    assert trained.generator is not level.generator


def test_training_is_deterministic(toy_pairs, quick_cfg):
    a, ra = train_gan(_level(quick_cfg), *toy_pairs, quick_cfg)
    b, rb = train_gan(_level(quick_cfg), *toy_pairs, quick_cfg)
    assert a.generator.equals(b.generator)
    assert a.discriminator.equals(b.discriminator)
    assert ra.to_frame().equals(rb.to_frame())


def test_input_level_is_not_modified(toy_pairs, quick_cfg):
    level = _level(quick_cfg)
    before = level.copy()
    trained, _ = train_gan(level, *toy_pairs, quick_cfg)
    assert level.generator.equals(before.generator)
    assert not trained.generator.equals(before.generator)


def test_report_has_one_record_per_iteration(toy_pairs, quick_cfg):
    _, report = train_gan(_level(quick_cfg), *toy_pairs, quick_cfg)
    df = report.to_frame()
    assert list(df.columns) == ['iter', 'd_loss', 'g_adv', 'coral', 'reg', 'total']
    assert df['iter'].tolist() == list(range(1, quick_cfg.iterations + 1))
    assert np.all(np.isfinite(df.values))


def test_discriminator_sees_matching_pairs(toy_pairs, quick_cfg, monkeypatch):
    C, R = toy_pairs
    pairs = {tuple(c): tuple(r) for c, r in zip(C, R)}
    seen = []
    original = gan_trainer.hstack

    def spy(A, B):
        seen.append((A.copy(), B.copy()))
        return original(A, B)

    monkeypatch.setattr(gan_trainer, 'hstack', spy)
    train_gan(_level(quick_cfg), C, R, quick_cfg)

    # three concatenations per iteration; the first pairs conditions with reals
    assert len(seen) == 3 * quick_cfg.iterations
    for cond, real in seen[0::3]:
        for c, r in zip(cond, real):
            assert pairs[tuple(c)] == tuple(r)


def _record_adam_calls(monkeypatch):
    calls = []
    original = gan_trainer.adam_step

    def spy(net, grads, state):
        new, new_state = original(net, grads, state)
        calls.append((net.copy(), new.copy(), grads))
        return new, new_state

    monkeypatch.setattr(gan_trainer, 'adam_step', spy)
    return calls


def test_frozen_network_untouched_during_each_step(toy_pairs, quick_cfg, monkeypatch):
    calls = _record_adam_calls(monkeypatch)
    level = _level(quick_cfg)
    trained, _ = train_gan(level, *toy_pairs, quick_cfg)

    assert len(calls) == 2 * quick_cfg.iterations
    d_calls, g_calls = calls[0::2], calls[1::2]
    assert all(before.out_dim == 1 for before, _, _ in d_calls)
    assert all(before.out_dim == level.sample_dim for before, _, _ in g_calls)

    # G entering each G-step is exactly G after the previous G-step (the D-step in between left it alone)
    g_prev = level.generator
    for before, after, _ in g_calls:
        assert before.equals(g_prev)
        g_prev = after
    assert trained.generator.equals(g_prev)

    # and D entering each D-step is D after the previous D-step
    d_prev = level.discriminator
    for before, after, _ in d_calls:
        assert before.equals(d_prev)
        d_prev = after
    assert trained.discriminator.equals(d_prev)


def test_reg_weight_scales_discriminator_regularizer(toy_pairs, quick_cfg, monkeypatch):
    calls = _record_adam_calls(monkeypatch)
    for w in (0.0, 2.0):
        cfg = replace(quick_cfg, iterations=1, reg_weight=w)
        train_gan(_level(cfg), *toy_pairs, cfg)
    (d0, _, plain), _, (_, _, weighted), _ = calls

    for layer, a, b in zip(d0.layers, plain, weighted):
        W = layer.weights
        np.testing.assert_allclose(b.weights - a.weights, 2.0 * W / np.linalg.norm(W), rtol=1e-9, atol=1e-12)
        np.testing.assert_array_equal(b.bias, a.bias)


def test_zero_reg_weight_drops_regularizer_from_total(toy_pairs, quick_cfg):
    cfg = replace(quick_cfg, reg_weight=0.0)
    _, report = train_gan(_level(cfg), *toy_pairs, cfg)
    for rec in report.records:
        assert rec.reg > 0
        assert rec.total == cfg.lambda1 * rec.g_adv + cfg.lambda2 * rec.coral


@pytest.mark.parametrize("ablation", ['coral_only', 'adversarial_only'])
def test_ablation_totals_drop_one_term(toy_pairs, quick_cfg, ablation):
    cfg = replace(quick_cfg, ablation=ablation)
    _, report = train_gan(_level(cfg), *toy_pairs, cfg)
    for rec in report.records:
        if ablation == 'coral_only':
            assert rec.total == cfg.lambda2 * rec.coral + rec.reg
        else:
            assert rec.total == cfg.lambda1 * rec.g_adv + rec.reg


def test_level_weights_must_match_config(toy_pairs, quick_cfg):
    level = _level(quick_cfg)
    with pytest.raises(BadSpec):
        train_gan(level, *toy_pairs, replace(quick_cfg, ablation='coral_only'))


def test_input_validation(toy_pairs, quick_cfg):
    C, R = toy_pairs
    level = _level(quick_cfg)
    with pytest.raises(EmptyDataset):
        train_gan(level, np.zeros((0, 3)), np.zeros((0, 2)), quick_cfg)
    with pytest.raises(ShapeMismatch):
        train_gan(level, C, R[:-1], quick_cfg)
    with pytest.raises(ShapeMismatch):
        train_gan(level, C[:, :2], R, quick_cfg)
    with pytest.raises(DegenerateSample):
        train_gan(level, C[:1], R[:1], quick_cfg)


def test_batch_larger_than_dataset_is_clamped(toy_pairs, quick_cfg, caplog):
    C, R = toy_pairs
    with caplog.at_level(logging.WARNING, logger='training.gan_trainer'):
        _, report = train_gan(_level(quick_cfg), C[:5], R[:5], quick_cfg)
    assert "exceeds" in caplog.text
    assert len(report.records) == quick_cfg.iterations


def test_overflow_raises_non_finite_loss(toy_pairs, quick_cfg):
    C, R = toy_pairs
    with pytest.raises(NonFiniteLoss) as exc:
        train_gan(_level(quick_cfg), C * 1e200, R, quick_cfg)
    assert exc.value.iteration == 1


def test_overflowing_generator_output_stops_before_discriminator(toy_pairs, quick_cfg, monkeypatch):
    C, R = toy_pairs
    level = _level(quick_cfg)
    for layer in level.generator.layers:
        layer.weights = np.full_like(layer.weights, 1e200)
    seen = []
    monkeypatch.setattr(gan_trainer, 'hstack', lambda A, B: seen.append(1))

    with pytest.raises(NonFiniteLoss, match="generator output") as exc:
        train_gan(level, np.abs(C) + 0.1, R, quick_cfg)
    assert exc.value.iteration == 1
    assert seen == []


def test_minibatches_cover_each_epoch():
    rng = np.random.default_rng(0)
    stream = minibatches(10, 4, rng)
    epoch = [next(stream) for _ in range(3)]
    assert [b.size for b in epoch] == [4, 4, 2]
    assert sorted(np.concatenate(epoch).tolist()) == list(range(10))

    stream = minibatches(9, 4, np.random.default_rng(0))
    sizes = [next(stream).size for _ in range(4)]
    assert sizes == [4, 4, 4, 4]


def test_generate_keeps_row_correspondence(quick_cfg, rng):
    level = _level(quick_cfg)
    c = rng.standard_normal((1, 3))
    out = generate(level, np.vstack([c, c, rng.standard_normal((2, 3))]))
    assert out.shape == (4, 2)
    np.testing.assert_array_equal(out[0], out[1])


def test_build_level_seeds_differ_per_network(quick_cfg):
    low = build_level('low', 3, 3, quick_cfg, 'desk')
    high = build_level('high', 3, 3, quick_cfg, 'desk')
    assert not np.array_equal(low.generator.layers[0].weights, high.generator.layers[0].weights)
    assert low.discriminator.in_dim == 6 and low.discriminator.out_dim == 1


@pytest.mark.slow
def test_linear_map_coral_converges():
    rng = np.random.default_rng(2)
    A = np.array([[2.0, 0.5], [-1.0, 1.5]])
    b = np.array([1.0, -2.0])
    C = rng.standard_normal((512, 2))
    held_out = rng.standard_normal((256, 2))
    target = held_out @ A.T + b

    cfg = TrainConfig(iterations=5000, batch_size=64, lr_low=1e-3, architecture='desk')
    level = build_level('low', 2, 2, cfg, 'desk')
    before = coral_loss(target, generate(level, held_out)).value
    trained, _ = train_gan(level, C, C @ A.T + b, cfg)
    after = coral_loss(target, generate(trained, held_out)).value
    assert after < 0.1 * before
