"""
Feature binning for histogram-based split search

Each feature is mapped to at most n_bins integer bins. With few distinct
values the thresholds are midpoints between consecutive values; otherwise
they are quantiles of the training column.
"""

from typing import List

import numpy as np

from utils.errors import DimensionMismatch


class BinMapper:
    """Maps real-valued features to bin indices learned from training data"""

    def __init__(self, n_bins: int = 256):
        self.n_bins = int(n_bins)
        self.thresholds_: List[np.ndarray] = []

    def fit(self, X: np.ndarray) -> 'BinMapper':
        X = np.asarray(X, dtype=np.float64)
        self.thresholds_ = []
        for j in range(X.shape[1]):
            distinct = np.unique(X[:, j])
            if distinct.shape[0] <= self.n_bins:
                thresholds = (distinct[:-1] + distinct[1:]) / 2.0
            else:
                percentiles = np.linspace(0, 100, self.n_bins + 1)[1:-1]
                thresholds = np.unique(np.percentile(X[:, j], percentiles, method='midpoint'))
            self.thresholds_.append(thresholds)
        return self

    @property
    def n_features(self) -> int:
        return len(self.thresholds_)

    def bins_per_feature(self) -> List[int]:
        return [t.shape[0] + 1 for t in self.thresholds_]

    def transform(self, X: np.ndarray) -> np.ndarray:
        """Bin b holds values in (threshold[b-1], threshold[b]]"""
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise DimensionMismatch(f"Binner was fitted on {self.n_features} feature(s), got shape {X.shape}")
        binned = np.empty(X.shape, dtype=np.intp)
        for j, thresholds in enumerate(self.thresholds_):
            binned[:, j] = np.searchsorted(thresholds, X[:, j], side='left')
        return binned
