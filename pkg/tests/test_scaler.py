"""
Tests for min-max scaling onto [-1, 1]
"""

import numpy as np
import pytest

from data.dataset import Dataset
from data.scaler import FeatureScaler, fit_scaler, inverse_transform, transform
from utils.errors import DimensionMismatch


def test_fit_records_min_and_max():
    scaler = fit_scaler(np.array([[0.0, -3.0], [10.0, 7.0], [5.0, 1.0]]))
    np.testing.assert_array_equal(scaler.data_min, [0.0, -3.0])
    np.testing.assert_array_equal(scaler.data_max, [10.0, 7.0])
    assert not scaler.constant.any()


def test_fit_accepts_dataset():
    dataset = Dataset.from_arrays([[1.0], [3.0]], ['a', 'b'])
    scaler = fit_scaler(dataset)
    assert scaler.data_min[0] == 1.0 and scaler.data_max[0] == 3.0


def test_endpoints_and_midpoint():
    scaler = FeatureScaler(np.array([0.0, -3.0]), np.array([10.0, 7.0]))
    scaled = transform(scaler, np.array([[0.0, -3.0], [10.0, 7.0], [5.0, 2.0]]))
    np.testing.assert_allclose(scaled, [[-1.0, -1.0], [1.0, 1.0], [0.0, 0.0]], atol=1e-15)


def test_out_of_range_values_map_outside():
    scaler = FeatureScaler(np.array([0.0]), np.array([10.0]))
    assert transform(scaler, np.array([[20.0]]))[0, 0] == pytest.approx(3.0)


def test_constant_feature_maps_to_zero_and_back():
    scaler = fit_scaler(np.array([[5.0, 1.0], [5.0, 2.0], [5.0, 3.0]]))
    assert scaler.constant.tolist() == [True, False]

    scaled = scaler.transform(np.array([[5.0, 2.0]]))
    assert scaled[0, 0] == 0.0
    assert scaler.inverse_transform(np.array([[0.7, 0.0]]))[0, 0] == 5.0


def test_round_trip_property():
    rng = np.random.default_rng(0)
    for _ in range(20):
        X = rng.normal(size=(50, 4)) * rng.uniform(0.1, 100.0, size=4) + rng.normal(size=4) * 10
        scaler = fit_scaler(X)
        back = inverse_transform(scaler, transform(scaler, X))
        assert np.max(np.abs(back - X)) < 1e-9


def test_dimension_mismatch():
    scaler = fit_scaler(np.zeros((2, 3)))
    with pytest.raises(DimensionMismatch):
        scaler.transform(np.zeros((2, 2)))
