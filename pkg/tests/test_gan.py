"""
Tests for the GAN config, model construction, training and sampling
"""

import logging

import numpy as np
import pytest

from gan.config import GanConfig, resolve_coding_size
from gan.trainer import (
    _discriminator_step,
    _generator_step,
    build_gan,
    generate,
    load_gan_model,
    save_gan_model,
    train_gan,
)
from networks.dense import forward
from networks.optimizers import make_optimizer
from utils.errors import DegenerateClass, InvalidCodingSize, InvalidConfig, NonFiniteLoss


def _params_equal(a, b) -> bool:
    return all(np.array_equal(p, q) for p, q in zip(a.parameters(), b.parameters()))


# =============================================================================
# GanConfig
# =============================================================================

def test_defaults():
    config = GanConfig()
    assert config.minor_classes == 'all'
    assert config.coding_size == 'auto'
    assert config.batch_size == 32
    assert config.max_iter == 10
    assert config.generator_hidden_layer_sizes == (100, 200, 300, 400, 500)
    assert config.discriminator_hidden_layer_sizes == (500, 400, 300, 200, 100)
    assert config.generator_learning_rate == config.discriminator_learning_rate == 1e-4
    assert config.random_seed == 42
    assert config.n_jobs == 1
    assert len(GanConfig.keys()) == 14


@pytest.mark.parametrize('changes', [
    {'batch_size': 0},
    {'max_iter': -1},
    {'generator_hidden_layer_sizes': []},
    {'discriminator_hidden_layer_sizes': [10, 0]},
    {'generator_learning_rate': 0.0},
    {'generator_hidden_layer_activation': 'relu'},
    {'discriminator_optimizer': 'sgd'},
    {'n_jobs': 0},
    {'coding_size': 'half'},
    {'minor_classes': []},
])
def test_invalid_values(changes):
    with pytest.raises(InvalidConfig):
        GanConfig.from_mapping(changes)


def test_unknown_key_rejected():
    with pytest.raises(InvalidConfig):
        GanConfig.from_mapping({'epochs': 5})


def test_lists_become_tuples():
    config = GanConfig.from_mapping({'generator_hidden_layer_sizes': [4, 8], 'minor_classes': ['2']})
    assert config.generator_hidden_layer_sizes == (4, 8)
    assert config.minor_classes == ('2',)
    assert config.to_dict()['generator_hidden_layer_sizes'] == [4, 8]


def test_to_dict_can_drop_n_jobs():
    assert 'n_jobs' not in GanConfig().to_dict(include_n_jobs=False)
    assert GanConfig().to_dict()['n_jobs'] == 1


@pytest.mark.parametrize('coding_size, d, expected', [('auto', 12, 6), ('auto', 7, 3), ('auto', 1, 1), (8, 3, 8)])
def test_resolve_coding_size(coding_size, d, expected):
    assert resolve_coding_size(GanConfig(coding_size=coding_size), d) == expected


def test_explicit_coding_size_below_one():
    with pytest.raises(InvalidCodingSize):
        GanConfig(coding_size=0)


# =============================================================================
# build_gan
# =============================================================================

def test_build_default_architecture():
    model = build_gan(GanConfig(), 12, 'x', seed=1)
    assert model.generator.layer_sizes == [6, 100, 200, 300, 400, 500, 12]
    assert model.discriminator.layer_sizes == [12, 500, 400, 300, 200, 100, 1]
    assert model.generator.activations[-1] == 'tanh'
    assert model.discriminator.activations[-1] == 'sigmoid'
    assert set(model.generator.activations[:-1]) == {'selu'}


def test_build_warns_on_layer_order(caplog):
    config = GanConfig(generator_hidden_layer_sizes=(50, 10), discriminator_hidden_layer_sizes=(5, 20))
    with caplog.at_level(logging.WARNING):
        model = build_gan(config, 4, 'x', seed=0)
    assert model.generator.layer_sizes == [2, 50, 10, 4]
    assert 'ascending' in caplog.text
    assert 'descending' in caplog.text


def test_build_is_deterministic(tiny_gan):
    a = build_gan(tiny_gan, 5, 'x', seed=3)
    b = build_gan(tiny_gan, 5, 'x', seed=3)
    assert _params_equal(a.generator, b.generator)
    assert _params_equal(a.discriminator, b.discriminator)


# =============================================================================
# train_gan
# =============================================================================

def test_max_iter_zero_is_identity(tiny_gan):
    config = tiny_gan.replace(max_iter=0)
    model = build_gan(config, 3, 'x', seed=0)

    trained, log = train_gan(model, np.zeros((10, 3)), config)

    assert _params_equal(trained.generator, model.generator)
    assert _params_equal(trained.discriminator, model.discriminator)
    assert len(log) == 0


def test_degenerate_class(tiny_gan):
    model = build_gan(tiny_gan, 3, 'lonely', seed=0)
    with pytest.raises(DegenerateClass) as excinfo:
        train_gan(model, np.zeros((1, 3)), tiny_gan)
    assert excinfo.value.label == 'lonely'


def test_train_log_shape(tiny_gan):
    config = tiny_gan.replace(max_iter=3, batch_size=16)
    samples = np.random.default_rng(0).uniform(-1, 1, size=(40, 3))
    model = build_gan(config, 3, 'x', seed=0)

    trained, log = train_gan(model, samples, config)

    assert len(log) == 3
    assert log.batches == [3, 3, 3]
    assert np.all(np.isfinite(log.d_losses)) and np.all(np.isfinite(log.g_losses))
    assert not _params_equal(trained.generator, model.generator)


def test_small_class_uses_whole_class_as_batch(tiny_gan):
    config = tiny_gan.replace(batch_size=32, max_iter=2)
    model = build_gan(config, 2, 'x', seed=0)
    _, log = train_gan(model, np.random.default_rng(1).uniform(-1, 1, size=(5, 2)), config)
    assert log.batches == [1, 1]


def test_training_is_deterministic(tiny_gan):
    samples = np.random.default_rng(2).uniform(-1, 1, size=(30, 4))
    first, log1 = train_gan(build_gan(tiny_gan, 4, 'x', seed=5), samples, tiny_gan)
    second, log2 = train_gan(build_gan(tiny_gan, 4, 'x', seed=5), samples, tiny_gan)
    assert _params_equal(first.generator, second.generator)
    assert log1.d_losses == log2.d_losses


def test_divergence_raises_non_finite_loss(tiny_gan):
    config = tiny_gan.replace(generator_learning_rate=1e300, discriminator_learning_rate=1e300, max_iter=5)
    samples = np.random.default_rng(0).uniform(-1, 1, size=(64, 3))
    model = build_gan(config, 3, 'x', seed=0)

    with pytest.raises(NonFiniteLoss) as excinfo:
        train_gan(model, samples, config)
    assert excinfo.value.class_label == 'x'


def test_discriminator_step_leaves_generator_alone(tiny_gan):
    model = build_gan(tiny_gan, 3, 'x', seed=0)
    generator_before = [p.copy() for p in model.generator.parameters()]
    real = np.random.default_rng(0).uniform(-1, 1, size=(8, 3))
    fake = forward(model.generator, np.random.default_rng(1).standard_normal((8, model.coding_size)))[0]
    d_state = make_optimizer('adam', model.discriminator.parameters(), 1e-3)

    discriminator, _, loss = _discriminator_step(model.discriminator, d_state, real, fake)

    assert np.isfinite(loss)
    assert not _params_equal(discriminator, model.discriminator)
    for p, q in zip(generator_before, model.generator.parameters()):
        np.testing.assert_array_equal(p, q)


def test_generator_step_leaves_discriminator_alone(tiny_gan):
    model = build_gan(tiny_gan, 3, 'x', seed=0)
    discriminator_before = [p.copy() for p in model.discriminator.parameters()]
    g_state = make_optimizer('adam', model.generator.parameters(), 1e-3)
    noise = np.random.default_rng(0).standard_normal((8, model.coding_size))

    generator, _, loss = _generator_step(model.generator, model.discriminator, g_state, noise)

    assert np.isfinite(loss)
    assert not _params_equal(generator, model.generator)
    for p, q in zip(discriminator_before, model.discriminator.parameters()):
        np.testing.assert_array_equal(p, q)


# =============================================================================
# generate / checkpoints
# =============================================================================

def test_generate_empty(tiny_gan):
    model = build_gan(tiny_gan, 4, 'x', seed=0)
    assert generate(model, 0, noise_seed=1).shape == (0, 4)


def test_generate_is_deterministic_and_in_range():
    model = build_gan(GanConfig(), 6, 'x', seed=0)
    a = generate(model, 1000, noise_seed=9)
    b = generate(model, 1000, noise_seed=9)
    np.testing.assert_array_equal(a, b)
    assert a.shape == (1000, 6)
    assert np.all((a > -1.0) & (a < 1.0))


def test_gan_model_round_trip(tmp_path, tiny_gan):
    model = build_gan(tiny_gan, 3, 'x', seed=4)
    loaded = load_gan_model(save_gan_model(model, tmp_path / 'gan'))
    assert loaded.class_label == 'x'
    assert loaded.coding_size == model.coding_size
    np.testing.assert_array_equal(generate(loaded, 10, 1), generate(model, 10, 1))


def test_train_log_csv(tmp_path, tiny_gan):
    samples = np.random.default_rng(0).uniform(-1, 1, size=(20, 2))
    _, log = train_gan(build_gan(tiny_gan, 2, 'x', seed=0), samples, tiny_gan)

    path = log.to_csv(tmp_path / 'log.csv')

    lines = open(path, encoding='utf-8').read().splitlines()
    assert lines[0] == 'epoch,d_loss,g_loss'
    assert len(lines) == 1 + tiny_gan.max_iter


# =============================================================================
# Distribution recovery (slow)
# =============================================================================

@pytest.mark.slow
def test_narrow_distribution_mean_is_recovered():
    rng = np.random.default_rng(0)
    samples = np.clip(rng.normal(0.5, 0.05, size=(200, 1)), -0.99, 0.99)
    config = GanConfig(max_iter=200)

    model, _ = train_gan(build_gan(config, 1, 'narrow', seed=1), samples, config)

    generated = generate(model, 1000, noise_seed=2)
    assert abs(generated.mean() - 0.5) <= 0.15


@pytest.mark.slow
def test_bimodal_mixture_keeps_both_modes():
    config = GanConfig(
        max_iter=500,
        generator_hidden_layer_sizes=(32, 64),
        discriminator_hidden_layer_sizes=(64, 32),
        generator_learning_rate=1e-3,
        discriminator_learning_rate=1e-3,
    )
    successes = 0
    for run in range(5):
        rng = np.random.default_rng(100 + run)
        modes = rng.choice([-0.6, 0.6], size=400)
        samples = np.clip(modes + rng.normal(0.0, 0.08, size=400), -0.99, 0.99).reshape(-1, 1)

        model, _ = train_gan(build_gan(config, 1, 'bimodal', seed=run), samples, config)
        generated = generate(model, 1000, noise_seed=run)[:, 0]

        if np.mean(generated < 0) >= 0.2 and np.mean(generated > 0) >= 0.2:
            successes += 1

    assert successes >= 4
