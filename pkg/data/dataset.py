"""
Dataset Representation
CSV ingestion and writing for quantified tabular data with a class target
"""

import logging
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Hashable, Iterable, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from utils.errors import (
    DimensionMismatch,
    DuplicateColumn,
    EmptyDataset,
    InvalidConfig,
    InvalidEncoding,
    LengthMismatch,
    MissingTargetColumn,
    NonFiniteFeature,
    NonNumericFeatureCell,
    RaggedRow,
)

logger = logging.getLogger(__name__)

# Integral floats below this magnitude are written without a fraction
_EXACT_INTEGER_LIMIT = 2 ** 53


def as_label_array(labels: Iterable[Hashable]) -> np.ndarray:
    """One-dimensional object array of plain Python labels (numpy scalars unwrapped)"""
    values = [label.item() if isinstance(label, np.generic) else label for label in labels]
    array = np.empty(len(values), dtype=object)
    array[:] = values
    return array


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    Feature matrix plus class-labeled target, immutable after construction

    Attributes:
        features: n x d float64 matrix
        target: length-n object array of class labels
        feature_names: d unique column names
        class_labels: distinct labels of target in first-appearance order (derived)
    """

    features: np.ndarray
    target: np.ndarray
    feature_names: Tuple[str, ...]

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        if features.ndim != 2:
            raise DimensionMismatch(f"Features must be a 2-D matrix, got {features.ndim} dimension(s)")
        target = as_label_array(self.target)
        if features.shape[0] != target.shape[0]:
            raise LengthMismatch(
                f"Feature rows ({features.shape[0]}) do not match target length ({target.shape[0]})"
            )
        if features.shape[1] < 1:
            raise DimensionMismatch("A dataset needs at least one feature")
        if not np.all(np.isfinite(features)):
            raise NonFiniteFeature("Features contain missing or non-finite values")

        names = tuple(str(name) for name in self.feature_names)
        if len(names) != features.shape[1]:
            raise DimensionMismatch(f"Expected {features.shape[1]} feature names, got {len(names)}")
        if len(set(names)) != len(names):
            raise InvalidConfig("Feature names must be unique")

        object.__setattr__(self, 'features', _frozen(features))
        object.__setattr__(self, 'target', _frozen(target))
        object.__setattr__(self, 'feature_names', names)

    @classmethod
    def from_arrays(cls, features: Any, target: Iterable[Hashable],
                    feature_names: Optional[Sequence[str]] = None) -> 'Dataset':
        """Build a dataset from in-memory arrays, naming features x0..x{d-1} by default"""
        features = np.asarray(features, dtype=np.float64)
        if features.ndim == 1:
            features = features.reshape(-1, 1)
        if feature_names is None:
            feature_names = [f"x{j}" for j in range(features.shape[1])]
        return cls(features, as_label_array(target), tuple(feature_names))

    @property
    def class_labels(self) -> Tuple[Hashable, ...]:
        return tuple(pd.unique(pd.Series(self.target, dtype=object)))

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def subset(self, indices: Sequence[int]) -> 'Dataset':
        """Rows at the given positions, in the given order"""
        indices = np.asarray(indices, dtype=np.intp)
        return Dataset(self.features[indices], self.target[indices], self.feature_names)

    def rows_of(self, label: Hashable) -> np.ndarray:
        """Feature rows belonging to one class"""
        return self.features[self.target == label]

    def equals(self, other: 'Dataset') -> bool:
        """Exact equality of features, target, names and label order"""
        return (
            self.feature_names == other.feature_names
            and self.class_labels == other.class_labels
            and np.array_equal(self.features, other.features)
            and list(self.target) == list(other.target)
        )


def class_counts(dataset: Union[Dataset, Iterable[Hashable]]) -> Dict[Hashable, int]:
    """
    Count samples per class

    Args:
        dataset: A Dataset, or a bare sequence of labels

    Returns:
        Mapping from class label to count, keys in first-appearance order
    """
    target = dataset.target if isinstance(dataset, Dataset) else list(dataset)
    counts = Counter(target)
    return {label: counts[label] for label in pd.unique(pd.Series(list(target), dtype=object))}


def _check_field_counts(csv_file: Path):
    """Reject undecodable files, repeated header names and rows whose field count differs from the header's"""
    try:
        with open(csv_file, 'r', encoding='utf-8') as f:
            lines = [line.rstrip('\r\n') for line in f]
    except UnicodeDecodeError as e:
        raise InvalidEncoding(f"{csv_file} is not valid UTF-8 (byte offset {e.start})") from e

    lines = [line for line in lines if line.strip()]
    if not lines:
        raise EmptyDataset(f"{csv_file} has no header row")

    header = lines[0].split(',')
    seen = set()
    for name in header:
        if name in seen:
            raise DuplicateColumn(name)
        seen.add(name)

    expected = len(header)
    for row, line in enumerate(lines[1:], start=1):
        found = line.count(',') + 1
        if found != expected:
            raise RaggedRow(row, expected, found)


def _parse_cell(text: str) -> float:
    """Correctly rounded float of one cell, NaN when the text is not a plain number"""
    if '_' in text:
        return np.nan
    try:
        return float(text)
    except ValueError:
        return np.nan


def load_csv(path: Union[str, Path], target_column: str) -> Dataset:
    """
    Load a quantified CSV file

    Args:
        path: CSV file with a mandatory header row
        target_column: Name of the class-label column

    Returns:
        Dataset with every non-target column parsed as float64, rows in file order

    Raises:
        FileNotFoundError: If the file doesn't exist
        MissingTargetColumn, RaggedRow, NonNumericFeatureCell, EmptyDataset,
        DuplicateColumn, InvalidEncoding
    """
    csv_file = Path(path)
    if not csv_file.exists():
        raise FileNotFoundError(f"Data file not found: {path}")

    _check_field_counts(csv_file)

    frame = pd.read_csv(
        csv_file,
        sep=',',
        dtype=str,
        keep_default_na=False,
        skip_blank_lines=True,
        encoding='utf-8',
    )

    if target_column not in frame.columns:
        raise MissingTargetColumn(target_column)
    if len(frame) == 0:
        raise EmptyDataset(f"{csv_file} has a header but no data rows")

    feature_names = [name for name in frame.columns if name != target_column]
    if not feature_names:
        raise DimensionMismatch(f"{csv_file} has no feature columns besides {target_column!r}")

    features = np.empty((len(frame), len(feature_names)), dtype=np.float64)
    for j, name in enumerate(feature_names):
        parsed = frame[name].str.strip().map(_parse_cell).to_numpy(dtype=np.float64)
        bad = ~np.isfinite(parsed)
        if bad.any():
            row = int(np.flatnonzero(bad)[0])
            raise NonNumericFeatureCell(row + 1, name, frame[name].iloc[row])
        features[:, j] = parsed

    target = as_label_array(frame[target_column].str.strip())
    dataset = Dataset(features, target, tuple(feature_names))

    logger.info(f"Loaded {dataset.n_samples} rows x {dataset.n_features} features from {csv_file}")
    return dataset


def format_value(value: float) -> str:
    """Shortest text that reads back to the same float; integral values without a fraction"""
    value = float(value)
    if value.is_integer() and abs(value) < _EXACT_INTEGER_LIMIT:
        return str(int(value))
    return repr(value)


def read_header(path: Union[str, Path]) -> Tuple[str, ...]:
    """Column names of a CSV file in file order"""
    try:
        return tuple(pd.read_csv(path, nrows=0, dtype=str, encoding='utf-8').columns)
    except UnicodeDecodeError as e:
        raise InvalidEncoding(f"{path} is not valid UTF-8") from e


def to_frame(dataset: Dataset, target_column: str,
             extra_columns: Optional[Dict[str, Sequence]] = None,
             target_position: Optional[int] = None) -> pd.DataFrame:
    """
    Features and target as a DataFrame

    The target goes after the features unless target_position says where;
    extra columns always come last.
    """
    frame = pd.DataFrame(dataset.features, columns=list(dataset.feature_names))
    position = frame.shape[1] if target_position is None else min(max(int(target_position), 0), frame.shape[1])
    frame.insert(position, target_column, list(dataset.target))
    for name, values in (extra_columns or {}).items():
        frame[name] = list(values)
    return frame


def write_csv(dataset: Dataset, path: Union[str, Path], target_column: str,
              extra_columns: Optional[Dict[str, Sequence]] = None,
              target_position: Optional[int] = None) -> str:
    """
    Write a dataset in the same CSV dialect load_csv reads

    Args:
        dataset: Dataset to write
        path: Output file path
        target_column: Header name for the label column
        extra_columns: Additional trailing columns (e.g. row origin)
        target_position: Column index of the target (default: after the features)

    Returns:
        Path of the written file
    """
    output_file = Path(path)
    output_file.parent.mkdir(parents=True, exist_ok=True)

    frame = to_frame(dataset, target_column, extra_columns, target_position)
    for name in dataset.feature_names:
        frame[name] = [format_value(v) for v in frame[name]]
    frame.to_csv(output_file, index=False, encoding='utf-8', lineterminator='\n')

    logger.debug(f"Wrote {dataset.n_samples} rows to {output_file}")
    return str(output_file)
