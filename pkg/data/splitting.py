"""
Stratified train/validation/test splitting
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Mapping, Sequence, Tuple

import numpy as np

from data.dataset import Dataset, class_counts
from utils.errors import ClassTooSmall, InvalidConfig

logger = logging.getLogger(__name__)

PARTITIONS = ('train', 'val', 'test')


@dataclass(frozen=True)
class SplitSpec:
    """Partition fractions (summing to 1) and the shuffle seed"""

    train_fraction: float = 0.6
    val_fraction: float = 0.2
    test_fraction: float = 0.2
    seed: int = 42

    def __post_init__(self):
        self.validate()

    def validate(self):
        """
        Raises:
            InvalidConfig: If a fraction is outside (0, 1) or they don't sum to 1
        """
        for name, value in zip(PARTITIONS, self.fractions):
            if not 0.0 < value < 1.0:
                raise InvalidConfig(f"{name} fraction must be in (0, 1), got {value}")
        if abs(sum(self.fractions) - 1.0) > 1e-9:
            raise InvalidConfig(f"Split fractions must sum to 1, got {sum(self.fractions)}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int):
            raise InvalidConfig(f"Split seed must be an integer, got {self.seed!r}")

    @property
    def fractions(self) -> Tuple[float, float, float]:
        return (self.train_fraction, self.val_fraction, self.test_fraction)

    @classmethod
    def from_mapping(cls, values: Mapping) -> 'SplitSpec':
        unknown = set(values) - {'train_fraction', 'val_fraction', 'test_fraction', 'seed'}
        if unknown:
            raise InvalidConfig(f"Unknown split keys: {', '.join(sorted(unknown))}")
        try:
            return cls(**{k: (int(v) if k == 'seed' else float(v)) for k, v in values.items()})
        except (TypeError, ValueError) as e:
            raise InvalidConfig(f"Invalid split settings: {e}") from e

    @classmethod
    def parse(cls, text: str, seed: int = 42) -> 'SplitSpec':
        """Parse 'train,val,test' fractions, e.g. '0.6,0.2,0.2'"""
        parts = [part.strip() for part in text.split(',')]
        if len(parts) != 3:
            raise InvalidConfig(f"--split expects three comma-separated fractions, got {text!r}")
        try:
            train, val, test = (float(part) for part in parts)
        except ValueError as e:
            raise InvalidConfig(f"--split fractions must be numbers: {text!r}") from e
        return cls(train, val, test, seed)

    def to_dict(self) -> dict:
        return {
            'train_fraction': self.train_fraction,
            'val_fraction': self.val_fraction,
            'test_fraction': self.test_fraction,
            'seed': self.seed,
        }


def allocate(count: int, fractions: Sequence[float]) -> List[int]:
    """
    Largest-remainder allocation of one class's samples to the partitions

    Ties on the fractional remainder go to the earlier partition (train, val,
    test). Every partition ends with at least one sample; a shortfall is taken
    from the currently largest partition.

    Args:
        count: Number of samples in the class (>= number of partitions)
        fractions: Partition fractions summing to 1

    Returns:
        Per-partition sample counts summing to count
    """
    quotas = [fraction * count for fraction in fractions]
    sizes = [int(math.floor(quota + 1e-9)) for quota in quotas]
    remainders = [quota - size for quota, size in zip(quotas, sizes)]

    leftover = count - sum(sizes)
    order = sorted(range(len(fractions)), key=lambda k: (-round(remainders[k], 9), k))
    for k in order[:leftover]:
        sizes[k] += 1

    for k in range(len(sizes)):
        while sizes[k] < 1:
            donor = max(range(len(sizes)), key=lambda j: (sizes[j], -j))
            sizes[donor] -= 1
            sizes[k] += 1

    return sizes


def split_indices(dataset: Dataset, spec: SplitSpec) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Row positions of each partition, ascending within a partition"""
    counts = class_counts(dataset)
    for label, count in counts.items():
        if count < len(PARTITIONS):
            raise ClassTooSmall(label, count)

    rng = np.random.default_rng(spec.seed)
    parts: List[List[np.ndarray]] = [[] for _ in PARTITIONS]

    for label in dataset.class_labels:
        members = np.flatnonzero(dataset.target == label)
        members = members[rng.permutation(members.shape[0])]
        sizes = allocate(members.shape[0], spec.fractions)

        start = 0
        for k, size in enumerate(sizes):
            parts[k].append(members[start:start + size])
            start += size

    return tuple(np.sort(np.concatenate(chunks)) for chunks in parts)


def stratified_split(dataset: Dataset, spec: SplitSpec) -> Tuple[Dataset, Dataset, Dataset]:
    """
    Split into train/validation/test keeping every class's proportions

    Args:
        dataset: Dataset to partition
        spec: Fractions and seed

    Returns:
        (train, val, test) datasets; together they hold every row exactly once

    Raises:
        ClassTooSmall: If a class has fewer than 3 samples
    """
    train_idx, val_idx, test_idx = split_indices(dataset, spec)
    logger.info(f"Split {dataset.n_samples} rows into train={len(train_idx)}, "
                f"val={len(val_idx)}, test={len(test_idx)}")
    return dataset.subset(train_idx), dataset.subset(val_idx), dataset.subset(test_idx)
