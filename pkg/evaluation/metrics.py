"""
Classification metrics: confusion matrix, per-class precision/recall/F1
"""

from dataclasses import dataclass
from typing import Any, Dict, Hashable, List, Sequence, Tuple

import numpy as np

from utils.errors import LengthMismatch, UnknownLabel


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """k x k counts; rows are true classes, columns predicted classes"""

    matrix: np.ndarray
    labels: Tuple[Hashable, ...]

    @property
    def total(self) -> int:
        return int(self.matrix.sum())

    def to_dict(self) -> Dict[str, Any]:
        return {'labels': list(self.labels), 'matrix': self.matrix.tolist()}


@dataclass(frozen=True)
class ClassScore:
    label: Hashable
    precision: float
    recall: float
    f1: float
    support: int
    undefined: Tuple[str, ...] = ()


@dataclass(frozen=True)
class ClassMetrics:
    """Per-class scores plus unweighted (macro) averages"""

    classes: Tuple[ClassScore, ...]

    @property
    def labels(self) -> List[Hashable]:
        return [score.label for score in self.classes]

    def __getitem__(self, label: Hashable) -> ClassScore:
        for score in self.classes:
            if score.label == label:
                return score
        raise KeyError(label)

    @property
    def macro_precision(self) -> float:
        return float(np.mean([s.precision for s in self.classes])) if self.classes else 0.0

    @property
    def macro_recall(self) -> float:
        return float(np.mean([s.recall for s in self.classes])) if self.classes else 0.0

    @property
    def macro_f1(self) -> float:
        return float(np.mean([s.f1 for s in self.classes])) if self.classes else 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'classes': [
                {
                    'label': s.label,
                    'precision': s.precision,
                    'recall': s.recall,
                    'f1': s.f1,
                    'support': s.support,
                    'undefined': list(s.undefined),
                }
                for s in self.classes
            ],
            'macro': {
                'precision': self.macro_precision,
                'recall': self.macro_recall,
                'f1': self.macro_f1,
            },
        }


def confusion(y_true: Sequence[Hashable], y_pred: Sequence[Hashable],
              class_order: Sequence[Hashable]) -> ConfusionMatrix:
    """
    Count (true class, predicted class) pairs

    Args:
        y_true: True labels
        y_pred: Predicted labels
        class_order: Label ordering of rows and columns

    Returns:
        ConfusionMatrix over class_order

    Raises:
        LengthMismatch: If y_true and y_pred differ in length
        UnknownLabel: If a label is not in class_order
    """
    y_true, y_pred = list(y_true), list(y_pred)
    if len(y_true) != len(y_pred):
        raise LengthMismatch(f"y_true has {len(y_true)} labels but y_pred has {len(y_pred)}")

    position = {label: k for k, label in enumerate(class_order)}
    matrix = np.zeros((len(position), len(position)), dtype=np.int64)
    for truth, guess in zip(y_true, y_pred):
        for label in (truth, guess):
            if label not in position:
                raise UnknownLabel(label)
        matrix[position[truth], position[guess]] += 1

    return ConfusionMatrix(matrix, tuple(class_order))


def harmonic_f1(precision: float, recall: float) -> float:
    """F1 as the harmonic mean of precision and recall (0 when both are 0)"""
    if precision + recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def precision_recall_f1(cm: ConfusionMatrix) -> ClassMetrics:
    """
    Per-class precision, recall and F1 from a confusion matrix

    Any 0/0 ratio is defined as 0 and listed in the class's `undefined` tuple.

    Args:
        cm: Confusion matrix

    Returns:
        ClassMetrics in cm.labels order
    """
    matrix = cm.matrix
    scores = []
    for k, label in enumerate(cm.labels):
        hits = float(matrix[k, k])
        predicted = float(matrix[:, k].sum())
        actual = float(matrix[k, :].sum())

        undefined = []
        if predicted > 0:
            precision = hits / predicted
        else:
            precision = 0.0
            undefined.append('precision')
        if actual > 0:
            recall = hits / actual
        else:
            recall = 0.0
            undefined.append('recall')
        if precision + recall == 0:
            undefined.append('f1')

        scores.append(ClassScore(label, precision, recall, harmonic_f1(precision, recall),
                                 int(actual), tuple(undefined)))

    return ClassMetrics(tuple(scores))


def accuracy(y_true: Sequence[Hashable], y_pred: Sequence[Hashable]) -> float:
    y_true, y_pred = list(y_true), list(y_pred)
    if len(y_true) != len(y_pred):
        raise LengthMismatch(f"y_true has {len(y_true)} labels but y_pred has {len(y_pred)}")
    if not y_true:
        return 0.0
    return sum(1 for a, b in zip(y_true, y_pred) if a == b) / len(y_true)
