"""
Shared fixtures: synthetic datasets shaped like the drug-consumption data,
small GAN configs and CSV helpers
"""

from pathlib import Path
from typing import Dict, Sequence

import numpy as np
import pandas as pd
import pytest

from data.dataset import Dataset
from gan.config import GanConfig


def gaussian_classes(counts: Dict, n_features: int = 4, spread: float = 4.0, seed: int = 0) -> Dataset:
    """One isotropic gaussian blob per class, blocks in the order of counts"""
    rng = np.random.default_rng(seed)
    features, target = [], []
    for k, (label, count) in enumerate(counts.items()):
        center = np.zeros(n_features)
        center[k % n_features] = spread
        features.append(rng.normal(center, 1.0, size=(count, n_features)))
        target.extend([label] * count)
    return Dataset.from_arrays(np.vstack(features), target)


def write_frame_csv(path: Path, dataset: Dataset, target_column: str = 'label') -> Path:
    frame = pd.DataFrame(dataset.features, columns=list(dataset.feature_names))
    frame[target_column] = [str(label) for label in dataset.target]
    frame.to_csv(path, index=False, lineterminator='\n')
    return path


@pytest.fixture
def dc_shaped() -> Dataset:
    """976/230/679 rows in classes 1/2/3, five features"""
    return gaussian_classes({1: 976, 2: 230, 3: 679}, n_features=5, seed=11)


@pytest.fixture
def mixture() -> Dataset:
    """Small imbalanced 3-class mixture: 120/30/30"""
    return gaussian_classes({'a': 120, 'b': 30, 'c': 30}, n_features=3, seed=3)


@pytest.fixture
def tiny_gan() -> GanConfig:
    """A GAN config that trains in well under a second"""
    return GanConfig(
        max_iter=2,
        batch_size=16,
        generator_hidden_layer_sizes=(8, 16),
        discriminator_hidden_layer_sizes=(16, 8),
        generator_learning_rate=1e-3,
        discriminator_learning_rate=1e-3,
    )


@pytest.fixture
def csv_writer(tmp_path):
    """Write rows (header first) to a CSV file and return its path"""

    def write(rows: Sequence[Sequence], name: str = 'data.csv') -> Path:
        path = tmp_path / name
        path.write_text('\n'.join(','.join(str(cell) for cell in row) for row in rows) + '\n', encoding='utf-8')
        return path

    return write
