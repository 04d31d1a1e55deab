"""
Min-max feature scaling onto [-1, 1]

fit() learns per-feature ranges from the training split only; transform()
applies them to any split. The target interval matches the generator's tanh
output, so inverse_transform maps every generated row back inside the fitted
range.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from data.dataset import Dataset
from utils.errors import DimensionMismatch, EmptyDataset


@dataclass(frozen=True, eq=False)
class FeatureScaler:
    """Per-feature (min, max) pairs for min-max scaling onto [-1, 1]"""

    data_min: np.ndarray
    data_max: np.ndarray

    def __post_init__(self):
        data_min = np.array(self.data_min, dtype=np.float64, copy=True)
        data_max = np.array(self.data_max, dtype=np.float64, copy=True)
        if data_min.shape != data_max.shape or data_min.ndim != 1:
            raise DimensionMismatch("Scaler min and max must be vectors of equal length")
        data_min.flags.writeable = False
        data_max.flags.writeable = False
        object.__setattr__(self, 'data_min', data_min)
        object.__setattr__(self, 'data_max', data_max)

    @property
    def n_features(self) -> int:
        return self.data_min.shape[0]

    @property
    def constant(self) -> np.ndarray:
        """Mask of features whose fitted range is a single value"""
        return self.data_max == self.data_min

    @property
    def data_range(self) -> np.ndarray:
        # constant features get a unit range so they map to 0 instead of dividing by zero
        return np.where(self.constant, 1.0, self.data_max - self.data_min)

    def _check(self, features: np.ndarray) -> np.ndarray:
        features = np.asarray(features, dtype=np.float64)
        if features.ndim == 1:
            features = features.reshape(1, -1) if features.shape[0] == self.n_features else features.reshape(-1, 1)
        if features.ndim != 2 or features.shape[1] != self.n_features:
            raise DimensionMismatch(
                f"Scaler was fitted on {self.n_features} feature(s), got shape {features.shape}"
            )
        return features

    def transform(self, features: np.ndarray) -> np.ndarray:
        """Map fitted [min, max] onto [-1, 1]; out-of-range values land outside [-1, 1]"""
        features = self._check(features)
        scaled = 2.0 * (features - self.data_min) / self.data_range - 1.0
        return np.where(self.constant, 0.0, scaled)

    def inverse_transform(self, scaled: np.ndarray) -> np.ndarray:
        """Map scaled values back to feature space; constant features return the constant"""
        scaled = self._check(scaled)
        features = (scaled + 1.0) / 2.0 * self.data_range + self.data_min
        return np.where(self.constant, self.data_min, features)


def fit_scaler(dataset: Union[Dataset, np.ndarray]) -> FeatureScaler:
    """
    Record per-feature min/max from the given data only

    Args:
        dataset: Training split (Dataset or n x d matrix)

    Returns:
        Fitted FeatureScaler
    """
    features = dataset.features if isinstance(dataset, Dataset) else np.asarray(dataset, dtype=np.float64)
    if features.ndim != 2:
        raise DimensionMismatch("Scaler input must be a 2-D matrix")
    if features.shape[0] < 1:
        raise EmptyDataset("Cannot fit a scaler on zero rows")
    return FeatureScaler(features.min(axis=0), features.max(axis=0))


def transform(scaler: FeatureScaler, features: np.ndarray) -> np.ndarray:
    return scaler.transform(features)


def inverse_transform(scaler: FeatureScaler, scaled: np.ndarray) -> np.ndarray:
    return scaler.inverse_transform(scaled)
