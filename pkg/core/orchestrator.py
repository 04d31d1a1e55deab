"""
Pipeline Orchestrator - runs the baseline-vs-augmented classification
pipeline and the GAN fine-tuning sweep
"""

import itertools
import logging
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, Iterator, List, Optional, Sequence, Tuple

from joblib import Parallel, delayed

from classifiers.spec import ClassifierSpec, predict, train_classifier
from core.resampler import BalancedDataset, GanOversampler, ResamplePlan
from data.dataset import Dataset
from data.scaler import FeatureScaler, fit_scaler
from data.splitting import SplitSpec, stratified_split
from evaluation.metrics import ClassMetrics, ConfusionMatrix, confusion, precision_recall_f1
from gan.config import GanConfig
from gan.trainer import TrainLog
from utils.errors import InvalidConfig, OversamplerError, SweepFailed

BASELINE = 'baseline'
AUGMENTED = 'augmented'

# Sweep factors; the first value of each is the base config
LEARNING_RATE_FACTORS = (1.0, 0.1, 10.0)
HIDDEN_SIZE_FACTORS = (1.0, 0.1, 10.0)
MAX_ITER_FACTORS = (1, 2)


@contextmanager
def pipeline_stage(name: str) -> Iterator[None]:
    """Tag errors raised inside the block with the pipeline stage"""
    try:
        yield
    except OversamplerError as e:
        if e.stage is None:
            e.stage = name
        raise


@dataclass
class BranchResult:
    """Classifier chosen for one branch and its validation score"""

    spec: ClassifierSpec
    classifier: Any
    validation_macro_f1: float


@dataclass
class PipelineReport:
    """Baseline and augmented test metrics computed on the same test split"""

    class_order: Tuple[Hashable, ...]
    baseline: ClassMetrics
    augmented: ClassMetrics
    baseline_confusion: ConfusionMatrix
    augmented_confusion: ConfusionMatrix
    validation_macro_f1: Dict[str, float]
    chosen_hyperparameters: Dict[str, Dict[str, Any]]
    gan_config: GanConfig
    split: SplitSpec
    classifier: ClassifierSpec
    seeds: Dict[str, int]
    plan: ResamplePlan
    split_sizes: Dict[str, int]
    train_logs: List[TrainLog] = field(default_factory=list)

    def metrics(self, method: str) -> ClassMetrics:
        return self.baseline if method == BASELINE else self.augmented

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready report; n_jobs is scheduling only and left out"""
        return {
            'class_order': list(self.class_order),
            'metrics': {
                BASELINE: self.baseline.to_dict(),
                AUGMENTED: self.augmented.to_dict(),
            },
            'confusion': {
                BASELINE: self.baseline_confusion.to_dict(),
                AUGMENTED: self.augmented_confusion.to_dict(),
            },
            'validation_macro_f1': dict(self.validation_macro_f1),
            'chosen_hyperparameters': dict(self.chosen_hyperparameters),
            'gan_config': self.gan_config.to_dict(include_n_jobs=False),
            'split': self.split.to_dict(),
            'split_sizes': dict(self.split_sizes),
            'classifier': self.classifier.to_dict(),
            'seeds': dict(self.seeds),
            'plan': self.plan.to_dict(),
            'train_logs': [log.to_dict() for log in self.train_logs],
        }


@dataclass
class TrialResult:
    """One sweep grid point and how it scored on the validation split"""

    index: int
    config: GanConfig
    factors: Dict[str, float]
    status: str
    validation_macro_f1: Optional[float] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.status == 'ok'

    def to_dict(self) -> Dict[str, Any]:
        return {
            'index': self.index,
            'config': self.config.to_dict(include_n_jobs=False),
            'factors': dict(self.factors),
            'status': self.status,
            'validation_macro_f1': self.validation_macro_f1,
            'error': self.error,
        }


def scale_widths(sizes: Sequence[int], factor: float) -> Tuple[int, ...]:
    return tuple(max(1, int(round(width * factor))) for width in sizes)


def sweep_grid(base_config: GanConfig, max_trials: Optional[int] = None) -> List[Tuple[GanConfig, Dict[str, float]]]:
    """
    Grid of GAN configs derived from the fine-tuning practices

    Learning rates are scaled by 0.1 and 10 independently for the generator
    and the discriminator, every hidden width by 0.1 and 10, and max_iter by 2.

    Args:
        base_config: Config at the centre of the grid (always the first point)
        max_trials: Keep only the first max_trials points

    Returns:
        List of (config, factors) in grid order
    """
    if max_trials is not None and max_trials < 1:
        raise InvalidConfig(f"max_trials must be at least 1, got {max_trials}")

    grid = []
    for g_lr, d_lr, hidden, iters in itertools.product(
            LEARNING_RATE_FACTORS, LEARNING_RATE_FACTORS, HIDDEN_SIZE_FACTORS, MAX_ITER_FACTORS):
        config = base_config.replace(
            generator_learning_rate=base_config.generator_learning_rate * g_lr,
            discriminator_learning_rate=base_config.discriminator_learning_rate * d_lr,
            generator_hidden_layer_sizes=scale_widths(base_config.generator_hidden_layer_sizes, hidden),
            discriminator_hidden_layer_sizes=scale_widths(base_config.discriminator_hidden_layer_sizes, hidden),
            max_iter=base_config.max_iter * iters,
        )
        factors = {
            'generator_learning_rate': g_lr,
            'discriminator_learning_rate': d_lr,
            'hidden_layer_sizes': hidden,
            'max_iter': iters,
        }
        grid.append((config, factors))
        if max_trials is not None and len(grid) >= max_trials:
            break
    return grid


class PipelineOrchestrator:
    """Coordinates split, augmentation, classifier training and evaluation"""

    def __init__(self, split: Optional[SplitSpec] = None, spec: Optional[ClassifierSpec] = None, seed: int = 0):
        """
        Initialize the orchestrator

        Args:
            split: Stratified split fractions and seed
            spec: Downstream classifier and its search space
            seed: Classifier seed, shared by both branches
        """
        self.split = split or SplitSpec()
        self.spec = spec or ClassifierSpec()
        self.seed = seed
        self.logger = logging.getLogger(__name__)

    def _split(self, dataset: Dataset) -> Tuple[Dataset, Dataset, Dataset, FeatureScaler]:
        with pipeline_stage('split'):
            train, val, test = stratified_split(dataset, self.split)
            scaler = fit_scaler(train)
        return train, val, test, scaler

    def _select_classifier(self, train: Dataset, val: Dataset, scaler: FeatureScaler) -> BranchResult:
        """
        Train one classifier per search-space point and keep the best on validation

        Only the training and validation splits are visible here.
        """
        X_train = scaler.transform(train.features)
        X_val = scaler.transform(val.features)
        class_order = _union(train.class_labels, val.class_labels)

        best: Optional[BranchResult] = None
        for candidate in self.spec.candidates():
            classifier = train_classifier(X_train, train.target, candidate, seed=self.seed)
            cm = confusion(val.target, predict(classifier, X_val), class_order)
            score = precision_recall_f1(cm).macro_f1
            self.logger.debug(f"Candidate {candidate.params}: validation macro-F1 {score:.4f}")
            if best is None or score > best.validation_macro_f1:
                best = BranchResult(candidate, classifier, score)
        return best

    def _augment(self, train: Dataset, gan_config: GanConfig) -> Tuple[BalancedDataset, GanOversampler]:
        with pipeline_stage('augment'):
            oversampler = GanOversampler(gan_config)
            balanced = oversampler.resample_dataset(train)
        return balanced, oversampler

    def _augmented_branch(self, train: Dataset, val: Dataset, scaler: FeatureScaler,
                          gan_config: GanConfig) -> Tuple[BranchResult, GanOversampler]:
        """Augment train, then select the classifier on val (shared by pipeline and sweep)"""
        balanced, oversampler = self._augment(train, gan_config)
        with pipeline_stage('train'):
            branch = self._select_classifier(balanced.dataset, val, scaler)
        return branch, oversampler

    def run_pipeline(self, dataset: Dataset, gan_config: GanConfig) -> PipelineReport:
        """
        Compare a classifier trained on the original and on the augmented training data

        Args:
            dataset: Full labelled dataset
            gan_config: Oversampler parameters

        Returns:
            PipelineReport with both metric blocks computed on the same test split

        Raises:
            OversamplerError: Any component error, tagged with the failing stage
        """
        gan_config.check_layer_order()
        train, val, test, scaler = self._split(dataset)

        with pipeline_stage('train'):
            baseline = self._select_classifier(train, val, scaler)
        self.logger.info(f"Baseline validation macro-F1: {baseline.validation_macro_f1:.4f}")

        augmented, oversampler = self._augmented_branch(train, val, scaler, gan_config)
        self.logger.info(f"Augmented validation macro-F1: {augmented.validation_macro_f1:.4f}")

        class_order = dataset.class_labels
        with pipeline_stage('test'):
            X_test = scaler.transform(test.features)
            baseline_cm = confusion(test.target, predict(baseline.classifier, X_test), class_order)
            augmented_cm = confusion(test.target, predict(augmented.classifier, X_test), class_order)

        return PipelineReport(
            class_order=class_order,
            baseline=precision_recall_f1(baseline_cm),
            augmented=precision_recall_f1(augmented_cm),
            baseline_confusion=baseline_cm,
            augmented_confusion=augmented_cm,
            validation_macro_f1={
                BASELINE: baseline.validation_macro_f1,
                AUGMENTED: augmented.validation_macro_f1,
            },
            chosen_hyperparameters={
                BASELINE: dict(baseline.spec.params),
                AUGMENTED: dict(augmented.spec.params),
            },
            gan_config=gan_config,
            split=self.split,
            classifier=self.spec,
            seeds={'gan': gan_config.random_seed, 'split': self.split.seed, 'classifier': self.seed},
            plan=oversampler.plan_,
            split_sizes={'train': train.n_samples, 'val': val.n_samples, 'test': test.n_samples},
            train_logs=list(oversampler.train_logs_.values()),
        )

    def _run_trial(self, index: int, config: GanConfig, factors: Dict[str, float],
                   train: Dataset, val: Dataset, scaler: FeatureScaler) -> TrialResult:
        try:
            branch, _ = self._augmented_branch(train, val, scaler, config)
        except OversamplerError as e:
            self.logger.warning(f"Trial {index} failed: {e}")
            return TrialResult(index, config, factors, 'failed', error=str(e))
        except Exception as e:
            self.logger.exception(f"Trial {index} failed unexpectedly: {e}")
            return TrialResult(index, config, factors, 'failed', error=f"{type(e).__name__}: {e}")
        self.logger.info(f"Trial {index}: validation macro-F1 {branch.validation_macro_f1:.4f}")
        return TrialResult(index, config, factors, 'ok', validation_macro_f1=branch.validation_macro_f1)

    def sweep(self, dataset: Dataset, base_config: GanConfig, max_trials: Optional[int] = None,
              n_jobs: int = 1, grid: Optional[Sequence[Tuple[GanConfig, Dict[str, float]]]] = None
              ) -> Tuple[GanConfig, List[TrialResult]]:
        """
        Evaluate GAN configs on the validation split and keep the best

        Args:
            dataset: Full labelled dataset (its test split is never used)
            base_config: Centre of the grid
            max_trials: Budget on the number of grid points
            n_jobs: Trials run concurrently
            grid: Explicit (config, factors) points replacing the default grid

        Returns:
            (best config, every trial in grid order); ties go to the earlier trial

        Raises:
            InvalidConfig: If the budget is empty
            SweepFailed: If every trial failed
        """
        if n_jobs < 1:
            raise InvalidConfig(f"n_jobs must be at least 1, got {n_jobs}")
        points = list(grid) if grid is not None else sweep_grid(base_config, max_trials)
        if max_trials is not None:
            if max_trials < 1:
                raise InvalidConfig(f"max_trials must be at least 1, got {max_trials}")
            points = points[:max_trials]
        if not points:
            raise InvalidConfig("Sweep grid is empty")

        train, val, _, scaler = self._split(dataset)
        self.logger.info(f"Sweeping {len(points)} GAN config(s) with n_jobs={n_jobs}")

        trials = Parallel(n_jobs=min(n_jobs, len(points)), prefer='threads')(
            delayed(self._run_trial)(index, config, factors, train, val, scaler)
            for index, (config, factors) in enumerate(points)
        )

        best: Optional[TrialResult] = None
        for trial in trials:
            if trial.ok and (best is None or trial.validation_macro_f1 > best.validation_macro_f1):
                best = trial
        if best is None:
            raise SweepFailed(f"All {len(trials)} sweep trial(s) failed")

        self.logger.info(f"Best trial {best.index}: validation macro-F1 {best.validation_macro_f1:.4f}")
        return best.config, trials


def _union(first: Sequence[Hashable], second: Sequence[Hashable]) -> Tuple[Hashable, ...]:
    return tuple(first) + tuple(label for label in second if label not in first)


def run_pipeline(dataset: Dataset, gan_config: GanConfig, split: SplitSpec,
                 spec: ClassifierSpec, seed: int = 0) -> PipelineReport:
    """Run the baseline-vs-augmented pipeline once"""
    return PipelineOrchestrator(split, spec, seed).run_pipeline(dataset, gan_config)


def sweep(dataset: Dataset, base_config: GanConfig, split: SplitSpec, spec: ClassifierSpec,
          max_trials: Optional[int] = None, n_jobs: int = 1, seed: int = 0) -> Tuple[GanConfig, List[TrialResult]]:
    """Run the fine-tuning sweep around base_config"""
    return PipelineOrchestrator(split, spec, seed).sweep(dataset, base_config, max_trials, n_jobs)
