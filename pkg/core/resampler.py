"""
GAN Oversampler - plans per-class deficits, trains one GAN per minority
class and appends the generated rows to the training data
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from joblib import Parallel, delayed
from tabulate import tabulate

from data.dataset import Dataset, as_label_array, class_counts
from data.scaler import FeatureScaler, fit_scaler
from gan.config import GanConfig
from gan.trainer import GanModel, TrainLog, build_gan, generate, train_gan
from utils.errors import (
    DegenerateClass,
    EmptyDataset,
    MajorityInMinorList,
    NonFiniteLoss,
    UnknownClass,
)
from utils.seeding import derive_seed

ORIGINAL = 'original'
SYNTHETIC = 'synthetic'

# Stream identifier for the generation noise, mixed into the class seed
_NOISE_STREAM = 4


@dataclass(frozen=True)
class ClassPlan:
    label: Hashable
    count: int
    deficit: int
    augment: bool


@dataclass(frozen=True)
class ResamplePlan:
    """Majority count and, per class, the number of rows to generate"""

    majority_count: int
    records: Tuple[ClassPlan, ...]

    @property
    def total(self) -> int:
        return sum(record.count for record in self.records)

    @property
    def augmented(self) -> List[ClassPlan]:
        return [record for record in self.records if record.augment]

    @property
    def deficits(self) -> Dict[Hashable, int]:
        """Deficits of the classes marked for augmentation"""
        return {record.label: record.deficit for record in self.augmented}

    def to_dict(self) -> Dict[str, Any]:
        return {
            'majority_count': self.majority_count,
            'total_after': self.total + sum(self.deficits.values()),
            'total_before': self.total,
            'classes': [
                {
                    'label': record.label,
                    'count': record.count,
                    'share': round(record.count / self.total, 4),
                    'deficit': record.deficit,
                    'augment': record.augment,
                }
                for record in self.records
            ],
        }

    def to_table(self) -> str:
        """Plan summary as a text table"""
        rows = [
            [record.label, record.count, f"{record.count / self.total:.0%}", record.deficit,
             'yes' if record.augment else 'no']
            for record in self.records
        ]
        return tabulate(rows, headers=['class', 'count', 'share', 'deficit', 'augment'], tablefmt='github')


@dataclass(frozen=True, eq=False)
class BalancedDataset:
    """Balanced training data with each row's origin and source class"""

    dataset: Dataset
    origin: Tuple[str, ...]
    source_class: Tuple[Hashable, ...]

    @property
    def n_original(self) -> int:
        return sum(1 for tag in self.origin if tag == ORIGINAL)

    @property
    def n_synthetic(self) -> int:
        return len(self.origin) - self.n_original


def ties_and_eligibility(counts: Mapping[Hashable, int]) -> FrozenSet[Hashable]:
    """
    Classes at the maximum count; none of them is ever augmented

    Args:
        counts: Non-empty mapping of class label to count

    Returns:
        The majority set
    """
    if not counts:
        raise EmptyDataset("Cannot determine the majority of an empty target")
    majority_count = max(counts.values())
    return frozenset(label for label, count in counts.items() if count == majority_count)


def plan(y_train: Iterable[Hashable], minor_classes: Union[str, Sequence[Hashable]] = 'all') -> ResamplePlan:
    """
    Work out how many rows each class needs to reach the majority count

    Args:
        y_train: Training labels
        minor_classes: 'all', or the labels to augment

    Returns:
        ResamplePlan with one record per class in first-appearance order

    Raises:
        EmptyDataset: If y_train is empty
        UnknownClass: If a listed label does not occur in y_train
        MajorityInMinorList: If a listed label is already at the majority count
    """
    counts = class_counts(as_label_array(y_train))
    majority = ties_and_eligibility(counts)
    majority_count = max(counts.values())

    if isinstance(minor_classes, str) and minor_classes == 'all':
        selected = {label for label in counts if label not in majority}
    else:
        selected = set()
        for label in minor_classes:
            if label not in counts:
                raise UnknownClass(label)
            if label in majority:
                raise MajorityInMinorList(label)
            selected.add(label)

    records = tuple(
        ClassPlan(label, count, majority_count - count, label in selected)
        for label, count in counts.items()
    )
    return ResamplePlan(majority_count, records)


@dataclass
class ClassResult:
    label: Hashable
    model: GanModel
    log: TrainLog
    synthetic: np.ndarray


def _train_class(label: Hashable, class_index: int, scaled_rows: np.ndarray,
                 deficit: int, config: GanConfig) -> ClassResult:
    """Build, train and sample the GAN of one class (runs inside a worker)"""
    class_seed = derive_seed(config.random_seed, class_index)
    model = build_gan(config, scaled_rows.shape[1], label, class_seed)
    try:
        model, log = train_gan(model, scaled_rows, config)
    except NonFiniteLoss as e:
        raise e.with_class(label) from e
    synthetic = generate(model, deficit, derive_seed(class_seed, _NOISE_STREAM))
    return ClassResult(label, model, log, synthetic)


class GanOversampler:
    """Oversamples minority classes with one GAN per class"""

    def __init__(self, config: Optional[GanConfig] = None):
        """
        Initialize the oversampler

        Args:
            config: GAN parameters (defaults when omitted)
        """
        self.config = config or GanConfig()
        self.logger = logging.getLogger(__name__)

        self.plan_: Optional[ResamplePlan] = None
        self.scaler_: Optional[FeatureScaler] = None
        self.models_: Dict[Hashable, GanModel] = {}
        self.train_logs_: Dict[Hashable, TrainLog] = {}

    def fit_resample(self, X_train: Any, y_train: Iterable[Hashable]) -> Tuple[np.ndarray, np.ndarray]:
        """
        Balance the training data

        Args:
            X_train: n x d feature matrix
            y_train: n class labels

        Returns:
            (X_balanced, y_balanced); the first n rows are the input rows verbatim
        """
        balanced = self.resample_dataset(Dataset.from_arrays(X_train, y_train))
        return np.array(balanced.dataset.features), np.array(balanced.dataset.target)

    def resample_dataset(self, dataset: Dataset) -> BalancedDataset:
        """
        Balance a Dataset and keep the origin of every row

        Args:
            dataset: Training data

        Returns:
            BalancedDataset: originals first, then synthetic rows grouped by
            class in class_labels order

        Raises:
            DegenerateClass: If a class to augment has fewer than 2 rows
            NonFiniteLoss: If a class's training diverges (tagged with the class)
        """
        self.plan_ = plan(dataset.target, self.config.minor_classes)
        self.scaler_ = fit_scaler(dataset)
        self.models_, self.train_logs_ = {}, {}

        jobs = self.plan_.augmented
        for record in jobs:
            if record.count < 2:
                raise DegenerateClass(record.label, record.count)

        origin = [ORIGINAL] * dataset.n_samples
        source = list(dataset.target)
        if not jobs:
            self.logger.info("Training data already balanced for the requested classes; nothing to generate")
            return BalancedDataset(dataset, tuple(origin), tuple(source))

        self.logger.info(
            f"Augmenting {len(jobs)} class(es) to {self.plan_.majority_count} samples each "
            f"with n_jobs={self.config.n_jobs}"
        )

        scaled = self.scaler_.transform(dataset.features)
        class_index = {label: k for k, label in enumerate(dataset.class_labels)}
        results = Parallel(n_jobs=min(self.config.n_jobs, len(jobs)), prefer='threads')(
            delayed(_train_class)(
                record.label,
                class_index[record.label],
                scaled[dataset.target == record.label],
                record.deficit,
                self.config,
            )
            for record in jobs
        )

        features = [dataset.features]
        for result in results:
            self.models_[result.label] = result.model
            self.train_logs_[result.label] = result.log
            features.append(self.scaler_.inverse_transform(result.synthetic))
            origin.extend([SYNTHETIC] * result.synthetic.shape[0])
            source.extend([result.label] * result.synthetic.shape[0])
            self.logger.info(f"Class {result.label!r}: generated {result.synthetic.shape[0]} rows")

        balanced = Dataset(np.vstack(features), as_label_array(source), dataset.feature_names)
        return BalancedDataset(balanced, tuple(origin), tuple(source))


def fit_resample(X_train: Any, y_train: Iterable[Hashable],
                 config: Optional[GanConfig] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Balance (X_train, y_train) with a fresh GanOversampler"""
    return GanOversampler(config).fit_resample(X_train, y_train)
