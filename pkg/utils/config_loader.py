"""
Configuration Loader
Application settings, experiment config files, CIGAN_* environment
overrides and the layered run configuration
"""

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

import yaml

from classifiers.spec import DEFAULT_PARAMS, GRADIENT_BOOSTED_TREES, ClassifierSpec
from data.splitting import SplitSpec
from gan.config import GanConfig
from utils.errors import InvalidConfig

ENV_PREFIX = 'CIGAN_'

REQUIRED_SETTINGS = ['output', 'logging', 'split', 'classifiers']
EXPERIMENT_SECTIONS = ('split', 'classifier')


def load_settings(config_path: str = 'config/config.yaml') -> Dict:
    """
    Load application settings from YAML file

    Args:
        config_path: Path to configuration file

    Returns:
        Settings dictionary

    Raises:
        FileNotFoundError: If config file doesn't exist
        InvalidConfig: If a required key is missing or the file is not a mapping
    """
    config_file = Path(config_path)

    if not config_file.exists():
        raise FileNotFoundError(f"Configuration file not found: {config_path}")

    with open(config_file, 'r', encoding='utf-8') as f:
        settings = yaml.safe_load(f)

    if not isinstance(settings, dict):
        raise InvalidConfig(f"Configuration file {config_path} must contain a mapping")

    # Validate required keys
    for key in REQUIRED_SETTINGS:
        if key not in settings:
            raise InvalidConfig(f"Missing required configuration key: {key}")

    return settings


def load_experiment_config(config_path: str) -> Dict[str, Any]:
    """
    Load an experiment config file

    JSON files (by suffix) are read with json; anything else with
    yaml.safe_load. Top-level keys are GanConfig parameter names plus the
    optional `split` and `classifier` sections.

    Args:
        config_path: Path to the experiment config

    Returns:
        {'gan': {...}, 'split': {...}, 'classifier': {...}}

    Raises:
        FileNotFoundError: If the file doesn't exist
        InvalidConfig: On parse errors or unknown keys
    """
    config_file = Path(config_path)
    if not config_file.exists():
        raise FileNotFoundError(f"Experiment config not found: {config_path}")

    with open(config_file, 'r', encoding='utf-8') as f:
        try:
            if config_file.suffix.lower() == '.json':
                values = json.load(f)
            else:
                values = yaml.safe_load(f)
        except (json.JSONDecodeError, yaml.YAMLError) as e:
            raise InvalidConfig(f"Cannot parse {config_path}: {e}") from e

    values = values or {}
    if not isinstance(values, dict):
        raise InvalidConfig(f"Experiment config {config_path} must contain a mapping")

    unknown = set(values) - set(GanConfig.keys()) - set(EXPERIMENT_SECTIONS)
    if unknown:
        raise InvalidConfig(f"Unknown key(s) in {config_path}: {', '.join(sorted(unknown))}")

    sections = {}
    for name in EXPERIMENT_SECTIONS:
        section = values.get(name) or {}
        if not isinstance(section, dict):
            raise InvalidConfig(f"Section {name!r} in {config_path} must be a mapping")
        sections[name] = section

    return {
        'gan': {key: value for key, value in values.items() if key not in EXPERIMENT_SECTIONS},
        **sections,
    }


def _parse_env_value(raw: str) -> Any:
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def env_overrides(environ: Optional[Mapping[str, str]] = None) -> Dict[str, Any]:
    """
    GanConfig values from CIGAN_<KEY> environment variables

    Values are parsed as JSON when possible (numbers, lists), otherwise
    taken as plain strings ('auto', 'all', 'selu').

    Args:
        environ: Environment mapping (os.environ by default)
    """
    environ = os.environ if environ is None else environ
    overrides = {}
    for key in GanConfig.keys():
        name = ENV_PREFIX + key.upper()
        if name in environ:
            overrides[key] = _parse_env_value(environ[name])
    return overrides


def resolve_gan_config(file_values: Optional[Mapping[str, Any]] = None,
                       env_values: Optional[Mapping[str, Any]] = None,
                       flag_values: Optional[Mapping[str, Any]] = None) -> GanConfig:
    """
    Layer GanConfig values: flag > environment > config file > default

    Flags whose value is None are treated as not given.
    """
    config = GanConfig()
    for layer in (file_values, env_values, flag_values):
        layer = {key: value for key, value in (layer or {}).items() if value is not None}
        if layer:
            config = GanConfig.from_mapping(layer, base=config)
    return config


def resolve_split(settings: Mapping[str, Any], file_values: Optional[Mapping[str, Any]] = None,
                  flag_text: Optional[str] = None, seed: Optional[int] = None) -> SplitSpec:
    """Split fractions and seed: flag > config file > settings"""
    values = dict(settings.get('split') or {})
    values.update(file_values or {})
    split = SplitSpec.from_mapping(values)
    if flag_text:
        split = SplitSpec.parse(flag_text, split.seed)
    if seed is not None:
        split = SplitSpec(split.train_fraction, split.val_fraction, split.test_fraction, seed)
    return split


def resolve_classifier(settings: Mapping[str, Any], file_values: Optional[Mapping[str, Any]] = None,
                       flag_kind: Optional[str] = None) -> ClassifierSpec:
    """
    Classifier kind and hyperparameters: flag > config file > settings

    Settings hold per-kind defaults under `classifiers`; config-file
    hyperparameters only apply when the file's kind is the one in use.
    """
    defaults = settings.get('classifiers') or {}
    file_values = dict(file_values or {})
    file_kind = file_values.pop('kind', None)
    kind = flag_kind or file_kind or defaults.get('default_kind', GRADIENT_BOOSTED_TREES)
    if kind not in DEFAULT_PARAMS:
        raise InvalidConfig(f"Unknown classifier kind {kind!r}; choose from {', '.join(DEFAULT_PARAMS)}")

    values = dict(defaults.get(kind) or {})
    if file_kind in (None, kind):
        values.update(file_values)
    return ClassifierSpec.from_mapping({'kind': kind, **values})


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs, validated before any work starts"""

    data: Path
    target: str
    out: Path
    gan: GanConfig
    split: SplitSpec
    classifier: ClassifierSpec
    max_trials: Optional[int] = None
    force: bool = False
    save_models: bool = False

    @property
    def classifier_seed(self) -> int:
        return self.gan.random_seed


def build_run_config(settings: Mapping[str, Any], data: str, target: str, out: str,
                     config_path: Optional[str] = None, seed: Optional[int] = None,
                     n_jobs: Optional[int] = None, classifier: Optional[str] = None,
                     split: Optional[str] = None, max_trials: Optional[int] = None,
                     force: bool = False, save_models: bool = False,
                     environ: Optional[Mapping[str, str]] = None) -> RunConfig:
    """
    Combine settings, config file, environment and flags into a RunConfig

    --seed sets the GAN seed and the split seed; the classifier is seeded
    with the GAN seed.

    Raises:
        InvalidConfig: On any invalid value
        FileNotFoundError: If the data or config file doesn't exist
    """
    if not Path(data).exists():
        raise FileNotFoundError(f"Data file not found: {data}")

    experiment = load_experiment_config(config_path) if config_path else {'gan': {}, 'split': {}, 'classifier': {}}
    gan = resolve_gan_config(
        experiment['gan'],
        env_overrides(environ),
        {'random_seed': seed, 'n_jobs': n_jobs},
    )
    # CSV labels are read as strings
    if not isinstance(gan.minor_classes, str):
        gan = gan.replace(minor_classes=tuple(str(label) for label in gan.minor_classes))

    if max_trials is not None and max_trials < 1:
        raise InvalidConfig(f"--max-trials must be at least 1, got {max_trials}")

    return RunConfig(
        data=Path(data),
        target=target,
        out=Path(out),
        gan=gan,
        split=resolve_split(settings, experiment['split'], split, seed),
        classifier=resolve_classifier(settings, experiment['classifier'], classifier),
        max_trials=max_trials,
        force=force,
        save_models=save_models,
    )
