"""
Tests for the command-line interface: outputs, exit codes and determinism
"""

import json
import os

import pytest
import yaml
from click.testing import CliRunner

from oversampler import main
from tests.conftest import write_frame_csv

TINY_GAN = {
    'max_iter': 2,
    'batch_size': 16,
    'generator_hidden_layer_sizes': [8, 16],
    'discriminator_hidden_layer_sizes': [16, 8],
    'generator_learning_rate': 0.001,
    'discriminator_learning_rate': 0.001,
}


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in list(os.environ):
        if name.startswith('CIGAN_'):
            monkeypatch.delenv(name)


@pytest.fixture
def settings_file(tmp_path):
    path = tmp_path / 'settings.yaml'
    path.write_text(yaml.safe_dump({
        'output': {'files': {}},
        'split': {'train_fraction': 0.6, 'val_fraction': 0.2, 'test_fraction': 0.2, 'seed': 42},
        'classifiers': {
            'default_kind': 'gradient-boosted-trees',
            'gradient-boosted-trees': {'n_trees': 10, 'max_depth': 2},
        },
        'logging': {'level': 'INFO', 'file': str(tmp_path / 'logs' / 'run.log'), 'console': False},
    }), encoding='utf-8')
    return path


@pytest.fixture
def gan_file(tmp_path):
    path = tmp_path / 'gan.json'
    path.write_text(json.dumps(TINY_GAN), encoding='utf-8')
    return path


@pytest.fixture
def invoke(settings_file):
    runner = CliRunner()

    def run(*args):
        return runner.invoke(main, ['--settings', str(settings_file), *[str(arg) for arg in args]])

    return run


@pytest.fixture
def mixture_csv(tmp_path, mixture):
    return write_frame_csv(tmp_path / 'mixture.csv', mixture)


# =============================================================================
# resample
# =============================================================================

def test_resample_balances_drug_consumption_shape(invoke, tmp_path, dc_shaped, gan_file):
    data = write_frame_csv(tmp_path / 'dc.csv', dc_shaped)
    out = tmp_path / 'out'

    result = invoke('resample', '--data', data, '--target', 'label', '--config', gan_file, '--out', out)

    assert result.exit_code == 0, result.output
    lines = (out / 'balanced.csv').read_text(encoding='utf-8').splitlines()
    assert lines[0].split(',')[-2:] == ['label', '__origin__']
    assert len(lines) == 1 + 2928
    assert sum(1 for line in lines[1:] if line.endswith(',synthetic')) == 2928 - 1885

    plan = json.loads((out / 'plan.json').read_text(encoding='utf-8'))
    assert plan['total_after'] == 2928
    assert sorted(p.name for p in (out / 'train_logs').iterdir()) == ['2.csv', '3.csv']


def test_resample_balanced_input_is_copied(invoke, tmp_path, gan_file):
    text = 'a,t,b\n1,x,0.5\n2,y,-3\n4.25,x,7\n0,y,1e-05\n'
    data = tmp_path / 'balanced.csv'
    data.write_text(text, encoding='utf-8')
    out = tmp_path / 'out'

    result = invoke('resample', '--data', data, '--target', 't', '--config', gan_file, '--out', out)

    assert result.exit_code == 0, result.output
    expected = [line + (',__origin__' if k == 0 else ',original') for k, line in enumerate(text.splitlines())]
    assert (out / 'balanced.csv').read_text(encoding='utf-8').splitlines() == expected


def test_resample_saves_models(invoke, tmp_path, mixture_csv, gan_file):
    out = tmp_path / 'out'
    result = invoke('resample', '--data', mixture_csv, '--target', 'label', '--config', gan_file,
                    '--out', out, '--save-models')

    assert result.exit_code == 0, result.output
    assert (out / 'models' / 'b' / 'generator.npz').exists()
    assert (out / 'models' / 'c' / 'model.json').exists()


# =============================================================================
# Exit codes
# =============================================================================

def test_missing_target_is_a_usage_error(invoke, tmp_path, mixture_csv):
    result = invoke('resample', '--data', mixture_csv, '--out', tmp_path / 'out')
    assert result.exit_code == 1
    assert '--target' in result.output


def test_unknown_classifier(invoke, tmp_path, mixture_csv, gan_file):
    result = invoke('pipeline', '--data', mixture_csv, '--target', 'label', '--config', gan_file,
                    '--out', tmp_path / 'out', '--classifier', 'random-forest')
    assert result.exit_code == 1
    assert 'random-forest' in result.output


def test_zero_max_trials(invoke, tmp_path, mixture_csv, gan_file):
    result = invoke('sweep', '--data', mixture_csv, '--target', 'label', '--config', gan_file,
                    '--out', tmp_path / 'out', '--max-trials', 0)
    assert result.exit_code == 1


def test_non_empty_output_needs_force(invoke, tmp_path, mixture_csv, gan_file):
    out = tmp_path / 'out'
    out.mkdir()
    (out / 'keep.txt').write_text('x', encoding='utf-8')
    args = ['resample', '--data', mixture_csv, '--target', 'label', '--config', gan_file, '--out', out]

    assert invoke(*args).exit_code == 1
    assert invoke(*args, '--force').exit_code == 0


def test_data_error_exit_code(invoke, csv_writer, tmp_path):
    data = csv_writer([['a', 't'], [1, 'x'], ['oops', 'y']])
    result = invoke('resample', '--data', data, '--target', 't', '--out', tmp_path / 'out')
    assert result.exit_code == 2
    assert 'oops' in result.output


def test_invalid_utf8_is_a_data_error(invoke, tmp_path):
    data = tmp_path / 'latin.csv'
    data.write_bytes(b'a,t\n1,x\n2,\xff\xfe\n')

    result = invoke('resample', '--data', data, '--target', 't', '--out', tmp_path / 'out')

    assert result.exit_code == 2
    assert 'UTF-8' in result.output


def test_duplicate_header_is_a_data_error(invoke, csv_writer, tmp_path):
    data = csv_writer([['a', 'a', 't'], [1, 2, 'x'], [3, 4, 'y']])
    result = invoke('resample', '--data', data, '--target', 't', '--out', tmp_path / 'out')
    assert result.exit_code == 2


def test_missing_target_column_exit_code(invoke, tmp_path, mixture_csv):
    result = invoke('resample', '--data', mixture_csv, '--target', 'class', '--out', tmp_path / 'out')
    assert result.exit_code == 2


def test_divergence_exit_code(invoke, tmp_path, mixture_csv):
    config = tmp_path / 'divergent.json'
    config.write_text(json.dumps({**TINY_GAN, 'max_iter': 5, 'generator_learning_rate': 1e300,
                                  'discriminator_learning_rate': 1e300}), encoding='utf-8')

    result = invoke('pipeline', '--data', mixture_csv, '--target', 'label', '--config', config,
                    '--out', tmp_path / 'out')

    assert result.exit_code == 3
    assert '[augment]' in result.output


# =============================================================================
# pipeline / sweep
# =============================================================================

def test_pipeline_report_is_byte_identical(invoke, tmp_path, mixture_csv, gan_file):
    outputs = []
    for k, n_jobs in enumerate((1, 1, 4)):
        out = tmp_path / f'run{k}'
        result = invoke('pipeline', '--data', mixture_csv, '--target', 'label', '--config', gan_file,
                        '--out', out, '--seed', 7, '--n-jobs', n_jobs)
        assert result.exit_code == 0, result.output
        outputs.append((out / 'report.json').read_bytes())

    assert outputs[0] == outputs[1] == outputs[2]
    report = json.loads(outputs[0])
    assert report['seeds'] == {'gan': 7, 'split': 7, 'classifier': 7}
    assert outputs[0].endswith(b'\n')


def test_pipeline_writes_text_table(invoke, tmp_path, mixture_csv, gan_file):
    out = tmp_path / 'out'
    result = invoke('pipeline', '--data', mixture_csv, '--target', 'label', '--config', gan_file,
                    '--out', out, '--split', '0.5,0.25,0.25')

    assert result.exit_code == 0, result.output
    text = (out / 'report.txt').read_text(encoding='utf-8')
    assert 'Baseline' in text and 'GAN' in text
    assert json.loads((out / 'report.json').read_text(encoding='utf-8'))['split']['train_fraction'] == 0.5


def test_sweep_single_trial_is_the_base_config(invoke, tmp_path, mixture_csv, gan_file):
    out = tmp_path / 'out'
    result = invoke('sweep', '--data', mixture_csv, '--target', 'label', '--config', gan_file,
                    '--out', out, '--max-trials', 1)

    assert result.exit_code == 0, result.output
    trials = json.loads((out / 'trials.json').read_text(encoding='utf-8'))
    best = json.loads((out / 'best_config.json').read_text(encoding='utf-8'))

    assert len(trials) == 1
    assert trials[0]['status'] == 'ok'
    for key, value in TINY_GAN.items():
        assert best[key] == value
    assert best['classifier']['kind'] == 'gradient-boosted-trees'
    assert 'n_jobs' not in best


def test_best_config_reproduces_the_winning_score(invoke, tmp_path, mixture_csv, gan_file):
    sweep_out = tmp_path / 'sweep'
    result = invoke('sweep', '--data', mixture_csv, '--target', 'label', '--config', gan_file,
                    '--out', sweep_out, '--max-trials', 3, '--seed', 3)
    assert result.exit_code == 0, result.output

    trials = json.loads((sweep_out / 'trials.json').read_text(encoding='utf-8'))
    scores = [trial['validation_macro_f1'] for trial in trials if trial['status'] == 'ok']
    best_config = sweep_out / 'best_config.json'

    report_out = tmp_path / 'report'
    result = invoke('pipeline', '--data', mixture_csv, '--target', 'label', '--config', best_config,
                    '--out', report_out)
    assert result.exit_code == 0, result.output

    report = json.loads((report_out / 'report.json').read_text(encoding='utf-8'))
    assert report['validation_macro_f1']['augmented'] == max(scores)
    assert report['seeds']['split'] == 3
