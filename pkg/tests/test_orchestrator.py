"""
Tests for the baseline-vs-augmented pipeline and the fine-tuning sweep
"""

import numpy as np
import pytest

from classifiers.spec import GRADIENT_BOOSTED_TREES, ClassifierSpec
from core.orchestrator import (
    AUGMENTED,
    BASELINE,
    PipelineOrchestrator,
    pipeline_stage,
    run_pipeline,
    scale_widths,
    sweep,
    sweep_grid,
)
from core.resampler import fit_resample
from data.dataset import class_counts
from data.splitting import SplitSpec
from gan.config import GanConfig
from tests.conftest import gaussian_classes
from utils.errors import InvalidConfig, NonFiniteLoss, SweepFailed


@pytest.fixture
def small_trees():
    return ClassifierSpec(GRADIENT_BOOSTED_TREES, {'n_trees': 10, 'max_depth': 2})


def _divergent(config: GanConfig) -> GanConfig:
    return config.replace(generator_learning_rate=1e300, discriminator_learning_rate=1e300, max_iter=5)


# =============================================================================
# sweep_grid
# =============================================================================

def test_sweep_grid_size_and_order():
    base = GanConfig()
    grid = sweep_grid(base)

    assert len(grid) == 54
    assert grid[0][0] == base
    assert all(factor == 1 for factor in grid[0][1].values())
    configs = [config for config, _ in grid]
    assert len(set(configs)) == 54


def test_sweep_grid_scales_each_practice():
    base = GanConfig(generator_hidden_layer_sizes=(4, 16), discriminator_hidden_layer_sizes=(16, 4), max_iter=3)
    grid = sweep_grid(base)

    widths = {config.generator_hidden_layer_sizes for config, _ in grid}
    assert widths == {(4, 16), (1, 2), (40, 160)}
    assert {config.max_iter for config, _ in grid} == {3, 6}
    rates = sorted({config.generator_learning_rate for config, _ in grid})
    assert rates == pytest.approx([1e-5, 1e-4, 1e-3])


def test_sweep_grid_budget():
    assert len(sweep_grid(GanConfig(), max_trials=5)) == 5
    with pytest.raises(InvalidConfig):
        sweep_grid(GanConfig(), max_trials=0)


def test_scale_widths_never_reaches_zero():
    assert scale_widths((3, 20), 0.1) == (1, 2)
    assert scale_widths((3, 20), 10.0) == (30, 200)


# =============================================================================
# run_pipeline
# =============================================================================

def test_pipeline_reports_every_metric_cell(mixture, tiny_gan, small_trees):
    report = run_pipeline(mixture, tiny_gan, SplitSpec(seed=1), small_trees, seed=1)

    assert report.class_order == ('a', 'b', 'c')
    for method in (BASELINE, AUGMENTED):
        cells = [getattr(score, name) for score in report.metrics(method).classes
                 for name in ('precision', 'recall', 'f1')]
        assert len(cells) == 9
        assert all(0.0 <= value <= 1.0 for value in cells)

    assert sum(s.support for s in report.baseline.classes) == report.split_sizes['test']
    assert report.plan.deficits == {'b': 54, 'c': 54}
    assert set(report.to_dict()) >= {'metrics', 'confusion', 'gan_config', 'seeds', 'plan'}
    assert 'n_jobs' not in report.to_dict()['gan_config']


def test_pipeline_on_balanced_data_gives_identical_branches(tiny_gan, small_trees):
    dataset = gaussian_classes({'x': 50, 'y': 50, 'z': 50}, n_features=3, seed=2)

    report = run_pipeline(dataset, tiny_gan, SplitSpec(seed=4), small_trees)

    assert report.baseline.to_dict() == report.augmented.to_dict()
    assert report.train_logs == []


def test_pipeline_is_deterministic(mixture, tiny_gan, small_trees):
    first = run_pipeline(mixture, tiny_gan, SplitSpec(seed=2), small_trees).to_dict()
    second = run_pipeline(mixture, tiny_gan.replace(n_jobs=4), SplitSpec(seed=2), small_trees).to_dict()
    assert first == second


def test_pipeline_tags_the_failing_stage(mixture, tiny_gan, small_trees):
    with pytest.raises(NonFiniteLoss) as excinfo:
        run_pipeline(mixture, _divergent(tiny_gan), SplitSpec(seed=0), small_trees)
    assert excinfo.value.stage == 'augment'


def test_pipeline_stage_keeps_the_first_tag():
    with pytest.raises(InvalidConfig) as excinfo:
        with pipeline_stage('outer'):
            with pipeline_stage('inner'):
                raise InvalidConfig('bad')
    assert excinfo.value.stage == 'inner'


def test_classifier_search_space_is_resolved_on_validation(mixture, tiny_gan):
    spec = ClassifierSpec(GRADIENT_BOOSTED_TREES, {'n_trees': 5}, {'max_depth': [1, 2]})

    report = run_pipeline(mixture, tiny_gan, SplitSpec(seed=3), spec)

    for method in (BASELINE, AUGMENTED):
        assert report.chosen_hyperparameters[method]['max_depth'] in (1, 2)


# =============================================================================
# sweep
# =============================================================================

def test_sweep_single_point_returns_base(mixture, tiny_gan, small_trees):
    best, trials = sweep(mixture, tiny_gan, SplitSpec(seed=0), small_trees, max_trials=1)
    assert best == tiny_gan
    assert len(trials) == 1 and trials[0].ok


def test_sweep_skips_failed_trials(mixture, tiny_gan, small_trees):
    grid = [(_divergent(tiny_gan), {'case': 'divergent'}), (tiny_gan, {'case': 'base'})]

    best, trials = PipelineOrchestrator(SplitSpec(seed=0), small_trees).sweep(mixture, tiny_gan, grid=grid)

    assert best == tiny_gan
    assert [trial.status for trial in trials] == ['failed', 'ok']
    assert 'diverged' in trials[0].error
    assert trials[0].to_dict()['validation_macro_f1'] is None


def test_sweep_records_unexpected_trial_errors(monkeypatch, mixture, tiny_gan, small_trees):
    broken = tiny_gan.replace(max_iter=3)
    original = PipelineOrchestrator._augmented_branch

    def branch(self, train, val, scaler, config):
        if config == broken:
            raise RuntimeError('worker lost')
        return original(self, train, val, scaler, config)

    monkeypatch.setattr(PipelineOrchestrator, '_augmented_branch', branch)
    grid = [(broken, {'case': 'broken'}), (tiny_gan, {'case': 'base'})]

    best, trials = PipelineOrchestrator(SplitSpec(seed=0), small_trees).sweep(mixture, tiny_gan, grid=grid)

    assert best == tiny_gan
    assert [trial.status for trial in trials] == ['failed', 'ok']
    assert trials[0].error == 'RuntimeError: worker lost'


def test_sweep_all_failed(mixture, tiny_gan, small_trees):
    grid = [(_divergent(tiny_gan), {}), (_divergent(tiny_gan.replace(random_seed=7)), {})]
    with pytest.raises(SweepFailed):
        PipelineOrchestrator(SplitSpec(seed=0), small_trees).sweep(mixture, tiny_gan, grid=grid)


def test_sweep_empty_budget(mixture, tiny_gan, small_trees):
    with pytest.raises(InvalidConfig):
        sweep(mixture, tiny_gan, SplitSpec(), small_trees, max_trials=0)


def test_sweep_picks_the_argmax_and_reproduces_its_score(mixture, tiny_gan, small_trees):
    orchestrator = PipelineOrchestrator(SplitSpec(seed=5), small_trees, seed=5)

    best, trials = orchestrator.sweep(mixture, tiny_gan, max_trials=4, n_jobs=2)

    scores = [trial.validation_macro_f1 for trial in trials]
    winner = trials[int(np.argmax(scores))]
    assert best == winner.config
    assert [trial.index for trial in trials] == [0, 1, 2, 3]

    train, val, _, scaler = orchestrator._split(mixture)
    branch, _ = orchestrator._augmented_branch(train, val, scaler, best)
    assert branch.validation_macro_f1 == winner.validation_macro_f1


# =============================================================================
# End-to-end behaviour (slow)
# =============================================================================

@pytest.mark.slow
def test_default_config_balances_drug_consumption_shape(dc_shaped):
    X, y = fit_resample(dc_shaped.features, dc_shaped.target)
    assert class_counts(y) == {1: 976, 2: 976, 3: 976}
    np.testing.assert_array_equal(X[:dc_shaped.n_samples], dc_shaped.features)


@pytest.mark.slow
def test_augmentation_does_not_hurt_minority_recall():
    config = GanConfig(
        max_iter=30,
        generator_hidden_layer_sizes=(32, 64),
        discriminator_hidden_layer_sizes=(64, 32),
        generator_learning_rate=1e-3,
        discriminator_learning_rate=1e-3,
    )
    spec = ClassifierSpec(GRADIENT_BOOSTED_TREES, {'n_trees': 30})

    wins = 0
    for run in range(5):
        dataset = gaussian_classes({'major': 500, 'minor1': 60, 'minor2': 60},
                                   n_features=4, spread=2.0, seed=run)
        report = run_pipeline(dataset, config.replace(random_seed=run), SplitSpec(seed=run), spec, seed=run)

        baseline = np.mean([report.baseline[label].recall for label in ('minor1', 'minor2')])
        augmented = np.mean([report.augmented[label].recall for label in ('minor1', 'minor2')])
        if augmented >= baseline:
            wins += 1

    assert wins >= 3
