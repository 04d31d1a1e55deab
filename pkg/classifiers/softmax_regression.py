"""
Softmax regression trained by full-batch gradient descent on cross-entropy
"""

import logging
from typing import Any, Hashable, List, Sequence

import numpy as np
import pandas as pd

from networks.activations import cross_entropy_gradient
from networks.dense import DenseNetwork, backward, forward, init_network
from utils.errors import EmptyTrainingSet, LengthMismatch, SingleClassSoftmax


class SoftmaxRegression:
    """Single dense softmax layer over standardized features"""

    def __init__(self, learning_rate: float = 0.1, epochs: int = 500, seed: int = 0):
        self.learning_rate = float(learning_rate)
        self.epochs = int(epochs)
        self.seed = seed
        self.logger = logging.getLogger(__name__)

        self.classes_: List[Hashable] = []
        self.mean_: np.ndarray = np.zeros(0)
        self.scale_: np.ndarray = np.ones(0)
        self.network_: DenseNetwork = None

    def _standardize(self, X: np.ndarray) -> np.ndarray:
        return (X - self.mean_) / self.scale_

    def fit(self, X: Any, y: Sequence[Hashable]) -> 'SoftmaxRegression':
        X = np.asarray(X, dtype=np.float64)
        y = list(y)
        if X.shape[0] == 0:
            raise EmptyTrainingSet("Cannot train softmax regression on zero rows")
        if X.shape[0] != len(y):
            raise LengthMismatch(f"X has {X.shape[0]} rows but y has {len(y)} labels")

        self.classes_ = list(pd.unique(pd.Series(y, dtype=object)))
        if len(self.classes_) < 2:
            raise SingleClassSoftmax("Softmax regression needs at least two classes")

        self.mean_ = X.mean(axis=0)
        std = X.std(axis=0)
        self.scale_ = np.where(std > 0, std, 1.0)

        position = {label: c for c, label in enumerate(self.classes_)}
        one_hot = np.eye(len(self.classes_))[[position[label] for label in y]]
        inputs = self._standardize(X)

        network = init_network([X.shape[1], len(self.classes_)], 'linear', 'softmax', seed=self.seed)
        for _ in range(self.epochs):
            probabilities, cache = forward(network, inputs)
            grads = backward(network, cache, cross_entropy_gradient(probabilities, one_hot))
            network = network.with_parameters([
                p - self.learning_rate * g for p, g in zip(network.parameters(), grads.as_list())
            ])

        self.network_ = network
        return self

    def predict_proba(self, X: Any) -> np.ndarray:
        return forward(self.network_, self._standardize(np.asarray(X, dtype=np.float64)))[0]

    def predict(self, X: Any) -> np.ndarray:
        probabilities = self.predict_proba(X)
        labels = np.empty(probabilities.shape[0], dtype=object)
        labels[:] = [self.classes_[c] for c in np.argmax(probabilities, axis=1)]
        return labels
