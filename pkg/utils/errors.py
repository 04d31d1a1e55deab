"""
Error Hierarchy
Every failure the oversampler reports maps to one of three CLI exit codes
"""

from typing import Any, Optional


class OversamplerError(Exception):
    """Base class for all oversampler errors"""

    exit_code = 1

    def __init__(self, message: str):
        super().__init__(message)
        self.stage: Optional[str] = None


# =============================================================================
# Configuration errors (exit 1)
# =============================================================================

class ConfigError(OversamplerError):
    """Invalid configuration or command-line usage"""

    exit_code = 1


class InvalidConfig(ConfigError, ValueError):
    pass


class InvalidArchitecture(ConfigError, ValueError):
    pass


class InvalidCodingSize(ConfigError, ValueError):
    pass


class OutputDirNotEmpty(ConfigError):
    pass


# =============================================================================
# Data errors (exit 2)
# =============================================================================

class DataError(OversamplerError):
    """Input data violates a precondition"""

    exit_code = 2


class MissingTargetColumn(DataError, ValueError):
    def __init__(self, column: str):
        super().__init__(f"Target column not found in header: {column}")
        self.column = column


class NonNumericFeatureCell(DataError, ValueError):
    def __init__(self, row: int, col: str, value: str):
        super().__init__(f"Non-numeric feature value {value!r} at row {row}, column {col!r}")
        self.row = row
        self.col = col


class RaggedRow(DataError, ValueError):
    def __init__(self, row: int, expected: int, found: int):
        super().__init__(f"Row {row} has {found} fields, expected {expected}")
        self.row = row


class DuplicateColumn(DataError, ValueError):
    def __init__(self, column: str):
        super().__init__(f"Column {column!r} appears more than once in the header")
        self.column = column


class InvalidEncoding(DataError, ValueError):
    pass


class NonFiniteFeature(DataError, ValueError):
    pass


class EmptyDataset(DataError, ValueError):
    pass


class ClassTooSmall(DataError, ValueError):
    def __init__(self, label: Any, count: int, minimum: int = 3):
        super().__init__(f"Class {label!r} has {count} samples; at least {minimum} are required to split")
        self.label = label
        self.count = count


class DimensionMismatch(DataError, ValueError):
    pass


class ShapeMismatch(DataError, ValueError):
    pass


class CacheMismatch(DataError, ValueError):
    pass


class UnknownClass(DataError, ValueError):
    def __init__(self, label: Any):
        super().__init__(f"Class {label!r} does not occur in the training target")
        self.label = label


class MajorityInMinorList(DataError, ValueError):
    def __init__(self, label: Any):
        super().__init__(f"Class {label!r} is already at the majority count and cannot be augmented")
        self.label = label


class DegenerateClass(DataError, ValueError):
    def __init__(self, label: Any, count: int):
        super().__init__(f"Class {label!r} has {count} sample(s); at least 2 are required to train a GAN")
        self.label = label
        self.count = count


class UnknownLabel(DataError, ValueError):
    def __init__(self, label: Any):
        super().__init__(f"Label {label!r} is not in the class order")
        self.label = label


class LengthMismatch(DataError, ValueError):
    pass


class SingleClassSoftmax(DataError, ValueError):
    pass


class EmptyTrainingSet(DataError, ValueError):
    pass


# =============================================================================
# Training errors (exit 3)
# =============================================================================

class TrainingError(OversamplerError):
    """Training diverged or produced nothing usable"""

    exit_code = 3


class NonFiniteLoss(TrainingError):
    def __init__(self, epoch: int, batch: int, d_loss: float, g_loss: float,
                 class_label: Any = None):
        self.epoch = epoch
        self.batch = batch
        self.d_loss = d_loss
        self.g_loss = g_loss
        self.class_label = class_label
        super().__init__(self._describe())

    def _describe(self) -> str:
        where = f" for class {self.class_label!r}" if self.class_label is not None else ""
        return (f"GAN training diverged{where} at epoch {self.epoch}, minibatch {self.batch} "
                f"(d_loss={self.d_loss}, g_loss={self.g_loss})")

    def with_class(self, class_label: Any) -> 'NonFiniteLoss':
        """Return a copy of the error tagged with the offending class"""
        return NonFiniteLoss(self.epoch, self.batch, self.d_loss, self.g_loss, class_label)


class SweepFailed(TrainingError):
    pass
