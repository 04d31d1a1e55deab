"""
Histogram-binned gradient-boosted trees for multiclass classification
"""

import logging
from typing import Any, Hashable, List, Sequence

import numpy as np
import pandas as pd

from classifiers.binning import BinMapper
from classifiers.tree import RegressionTree
from networks.activations import softmax
from utils.errors import EmptyTrainingSet, LengthMismatch


class GradientBoostedTrees:
    """
    Additive depth-limited regression trees on multiclass log-loss gradients

    Every boosting round fits one tree per class to the softmax gradients
    (p - y) and hessians p(1 - p), then adds its shrunken output to that
    class's raw score.
    """

    def __init__(self, n_trees: int = 100, max_depth: int = 3, learning_rate: float = 0.1,
                 n_bins: int = 256, min_samples_leaf: int = 5, l2_regularization: float = 1.0,
                 seed: int = 0):
        self.n_trees = int(n_trees)
        self.max_depth = int(max_depth)
        self.learning_rate = float(learning_rate)
        self.n_bins = int(n_bins)
        self.min_samples_leaf = int(min_samples_leaf)
        self.l2_regularization = float(l2_regularization)
        self.seed = seed
        self.logger = logging.getLogger(__name__)

        self.classes_: List[Hashable] = []
        self.baseline_: np.ndarray = np.zeros(0)
        self.trees_: List[List[RegressionTree]] = []
        self.binner_: BinMapper = BinMapper(self.n_bins)

    def fit(self, X: Any, y: Sequence[Hashable]) -> 'GradientBoostedTrees':
        X = np.asarray(X, dtype=np.float64)
        y = list(y)
        if X.shape[0] == 0:
            raise EmptyTrainingSet("Cannot train gradient-boosted trees on zero rows")
        if X.shape[0] != len(y):
            raise LengthMismatch(f"X has {X.shape[0]} rows but y has {len(y)} labels")

        self.classes_ = list(pd.unique(pd.Series(y, dtype=object)))
        self.trees_ = []
        k = len(self.classes_)
        if k == 1:
            self.baseline_ = np.zeros(1)
            return self

        position = {label: c for c, label in enumerate(self.classes_)}
        codes = np.array([position[label] for label in y])
        one_hot = np.eye(k)[codes]

        self.binner_ = BinMapper(self.n_bins).fit(X)
        binned = self.binner_.transform(X)
        n_bins = self.binner_.bins_per_feature()

        priors = one_hot.mean(axis=0)
        self.baseline_ = np.log(priors)
        raw = np.tile(self.baseline_, (X.shape[0], 1))

        for _ in range(self.n_trees):
            probabilities = softmax(raw)
            round_trees = []
            for c in range(k):
                p = probabilities[:, c]
                tree = RegressionTree(self.max_depth, self.min_samples_leaf, self.l2_regularization)
                tree.fit(binned, p - one_hot[:, c], p * (1.0 - p), n_bins)
                raw[:, c] += self.learning_rate * tree.predict_binned(binned)
                round_trees.append(tree)
            self.trees_.append(round_trees)

        self.logger.debug(f"Fitted {len(self.trees_)} boosting round(s) for {k} classes")
        return self

    def decision_function(self, X: Any) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        raw = np.tile(self.baseline_, (X.shape[0], 1))
        if not self.trees_:
            return raw
        binned = self.binner_.transform(X)
        for round_trees in self.trees_:
            for c, tree in enumerate(round_trees):
                raw[:, c] += self.learning_rate * tree.predict_binned(binned)
        return raw

    def predict_proba(self, X: Any) -> np.ndarray:
        return softmax(self.decision_function(X))

    def predict(self, X: Any) -> np.ndarray:
        scores = self.decision_function(X)
        labels = np.empty(scores.shape[0], dtype=object)
        labels[:] = [self.classes_[c] for c in np.argmax(scores, axis=1)]
        return labels
