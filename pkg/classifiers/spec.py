"""
Downstream classifier specification and factory
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, Iterator, Mapping, Sequence, Union

import numpy as np

from classifiers.gradient_boosting import GradientBoostedTrees
from classifiers.softmax_regression import SoftmaxRegression
from utils.errors import InvalidConfig

logger = logging.getLogger(__name__)

SOFTMAX_REGRESSION = 'softmax-regression'
GRADIENT_BOOSTED_TREES = 'gradient-boosted-trees'

DEFAULT_PARAMS: Dict[str, Dict[str, Any]] = {
    SOFTMAX_REGRESSION: {
        'learning_rate': 0.1,
        'epochs': 500,
    },
    GRADIENT_BOOSTED_TREES: {
        'n_trees': 100,
        'max_depth': 3,
        'learning_rate': 0.1,
        'n_bins': 256,
        'min_samples_leaf': 5,
        'l2_regularization': 1.0,
    },
}

CLASSIFIER_KINDS = tuple(DEFAULT_PARAMS)

# Hyperparameters allowed to be zero
_NON_NEGATIVE = {'l2_regularization'}
_INTEGER = {'epochs', 'n_trees', 'max_depth', 'n_bins', 'min_samples_leaf'}

Classifier = Union[SoftmaxRegression, GradientBoostedTrees]


@dataclass(frozen=True)
class ClassifierSpec:
    """
    Downstream classifier kind, hyperparameters and optional search space

    Attributes:
        kind: 'softmax-regression' or 'gradient-boosted-trees'
        params: Hyperparameter overrides (kind defaults fill the rest)
        search_space: Hyperparameter name -> candidate values, searched on
            validation macro-F1 in grid order
    """

    kind: str = GRADIENT_BOOSTED_TREES
    params: Mapping[str, Any] = field(default_factory=dict)
    search_space: Mapping[str, Sequence[Any]] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in DEFAULT_PARAMS:
            raise InvalidConfig(f"Unknown classifier kind {self.kind!r}; choose from {', '.join(CLASSIFIER_KINDS)}")
        merged = dict(DEFAULT_PARAMS[self.kind])
        for name, value in dict(self.params).items():
            if name not in merged:
                raise InvalidConfig(f"Unknown {self.kind} hyperparameter {name!r}")
            merged[name] = value
        for name, values in dict(self.search_space).items():
            if name not in merged:
                raise InvalidConfig(f"Unknown {self.kind} hyperparameter {name!r} in search_space")
            if isinstance(values, (str, bytes)) or not list(values):
                raise InvalidConfig(f"search_space[{name!r}] must be a non-empty list")
            for value in values:
                _check_value(name, value)
        for name, value in merged.items():
            _check_value(name, value)

        object.__setattr__(self, 'params', merged)
        object.__setattr__(self, 'search_space', {k: list(v) for k, v in dict(self.search_space).items()})

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> 'ClassifierSpec':
        values = dict(values)
        kind = values.pop('kind', GRADIENT_BOOSTED_TREES)
        search_space = values.pop('search_space', {}) or {}
        return cls(kind, values, search_space)

    def candidates(self) -> Iterator['ClassifierSpec']:
        """Every hyperparameter setting of the search space, first values first"""
        names = list(self.search_space)
        for combo in itertools.product(*(self.search_space[name] for name in names)):
            yield ClassifierSpec(self.kind, {**self.params, **dict(zip(names, combo))})

    def to_dict(self) -> Dict[str, Any]:
        result = {'kind': self.kind, **self.params}
        if self.search_space:
            result['search_space'] = {k: list(v) for k, v in self.search_space.items()}
        return result


def _check_value(name: str, value: Any):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidConfig(f"Hyperparameter {name} must be a number, got {value!r}")
    if name in _INTEGER and int(value) != value:
        raise InvalidConfig(f"Hyperparameter {name} must be an integer, got {value!r}")
    if name in _NON_NEGATIVE:
        if value < 0:
            raise InvalidConfig(f"Hyperparameter {name} must be non-negative, got {value!r}")
    elif not value > 0:
        raise InvalidConfig(f"Hyperparameter {name} must be positive, got {value!r}")
    if name == 'n_bins' and value < 2:
        raise InvalidConfig(f"n_bins must be at least 2, got {value!r}")


def train_classifier(X: Any, y: Sequence[Hashable], spec: ClassifierSpec, seed: int = 0) -> Classifier:
    """
    Train the classifier described by spec

    Args:
        X: n x d features
        y: n labels
        spec: Classifier kind and hyperparameters (search_space is ignored here)
        seed: Seed for any random initialization

    Returns:
        Fitted classifier
    """
    logger.debug(f"Training {spec.kind} with {spec.params}")
    if spec.kind == SOFTMAX_REGRESSION:
        classifier = SoftmaxRegression(seed=seed, **spec.params)
    else:
        classifier = GradientBoostedTrees(seed=seed, **spec.params)
    return classifier.fit(X, y)


def predict(classifier: Classifier, X: Any) -> np.ndarray:
    """Predicted labels for the rows of X"""
    return classifier.predict(X)
