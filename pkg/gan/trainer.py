"""
GAN Trainer
Builds, trains and samples one generator/discriminator pair per class
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Hashable, List, Tuple, Union

import numpy as np
import pandas as pd

from gan.config import GanConfig, resolve_coding_size
from networks.activations import bce_gradient, bce_loss
from networks.checkpoint import load_network, save_network
from networks.dense import DenseNetwork, backward, forward, init_network
from networks.optimizers import adam_step, make_optimizer
from utils.errors import DegenerateClass, DimensionMismatch, NonFiniteLoss
from utils.seeding import derive_seed

logger = logging.getLogger(__name__)

# Stream identifiers mixed into the model seed
_GENERATOR_STREAM = 1
_DISCRIMINATOR_STREAM = 2
_TRAINING_STREAM = 3


@dataclass(frozen=True, eq=False)
class GanModel:
    """A generator/discriminator pair bound to one class"""

    class_label: Hashable
    generator: DenseNetwork
    discriminator: DenseNetwork
    coding_size: int
    rng_seed: int

    def __post_init__(self):
        if self.generator.input_size != self.coding_size:
            raise DimensionMismatch(
                f"Generator input width {self.generator.input_size} != coding size {self.coding_size}"
            )
        if self.generator.output_size != self.discriminator.input_size:
            raise DimensionMismatch(
                f"Generator output width {self.generator.output_size} != "
                f"discriminator input width {self.discriminator.input_size}"
            )

    @property
    def n_features(self) -> int:
        return self.generator.output_size


@dataclass
class TrainLog:
    """Per-epoch mean discriminator/generator losses and minibatch counts"""

    class_label: Hashable = None
    d_losses: List[float] = field(default_factory=list)
    g_losses: List[float] = field(default_factory=list)
    batches: List[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.d_losses)

    def record(self, d_loss: float, g_loss: float, n_batches: int):
        self.d_losses.append(float(d_loss))
        self.g_losses.append(float(g_loss))
        self.batches.append(int(n_batches))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'epoch': np.arange(1, len(self) + 1),
            'd_loss': self.d_losses,
            'g_loss': self.g_losses,
        })

    def to_csv(self, path: Union[str, Path]) -> str:
        """Write epoch,d_loss,g_loss rows for plotting"""
        output_file = Path(path)
        output_file.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(output_file, index=False, float_format='%.17g', lineterminator='\n')
        return str(output_file)

    def to_dict(self) -> dict:
        return {
            'class_label': self.class_label,
            'd_loss': list(self.d_losses),
            'g_loss': list(self.g_losses),
            'batches': list(self.batches),
        }


def build_gan(config: GanConfig, d: int, class_label: Hashable, seed: int) -> GanModel:
    """
    Build the generator and discriminator for one class

    Generator: [coding_size] + generator hidden sizes + [d], tanh output.
    Discriminator: [d] + discriminator hidden sizes + [1], sigmoid output.

    Args:
        config: GAN parameters
        d: Feature count
        class_label: Class the model will learn
        seed: Model seed; both networks and the training stream derive from it

    Returns:
        Untrained GanModel
    """
    config.check_layer_order()
    coding_size = resolve_coding_size(config, d)

    generator = init_network(
        [coding_size, *config.generator_hidden_layer_sizes, d],
        hidden_activation=config.generator_hidden_layer_activation,
        output_activation='tanh',
        seed=derive_seed(seed, _GENERATOR_STREAM),
    )
    discriminator = init_network(
        [d, *config.discriminator_hidden_layer_sizes, 1],
        hidden_activation=config.discriminator_hidden_layer_activation,
        output_activation='sigmoid',
        seed=derive_seed(seed, _DISCRIMINATOR_STREAM),
    )
    return GanModel(class_label, generator, discriminator, coding_size, int(seed))


def _discriminator_step(discriminator: DenseNetwork, d_state,
                        real: np.ndarray, fake: np.ndarray):
    """BCE on real rows labeled 1 and generated rows labeled 0; only the discriminator moves"""
    batch = np.vstack([real, fake])
    labels = np.concatenate([np.ones(real.shape[0]), np.zeros(fake.shape[0])]).reshape(-1, 1)

    scores, cache = forward(discriminator, batch)
    loss = bce_loss(scores, labels)
    grads = backward(discriminator, cache, bce_gradient(scores, labels))
    params, d_state = adam_step(d_state, discriminator.parameters(), grads.as_list())
    return discriminator.with_parameters(params), d_state, loss


def _generator_step(generator: DenseNetwork, discriminator: DenseNetwork, g_state, noise: np.ndarray):
    """Non-saturating loss: generated rows scored against label 1; the discriminator stays frozen"""
    fake, g_cache = forward(generator, noise)
    scores, d_cache = forward(discriminator, fake)
    labels = np.ones_like(scores)
    loss = bce_loss(scores, labels)

    d_grads = backward(discriminator, d_cache, bce_gradient(scores, labels))
    g_grads = backward(generator, g_cache, d_grads.inputs)
    params, g_state = adam_step(g_state, generator.parameters(), g_grads.as_list())
    return generator.with_parameters(params), g_state, loss


def train_gan(model: GanModel, class_samples: np.ndarray, config: GanConfig) -> Tuple[GanModel, TrainLog]:
    """
    Run the adversarial game on one class's scaled samples

    Each epoch shuffles the samples and walks minibatches of
    min(batch_size, m) rows; every minibatch takes one discriminator step and
    then one generator step, each on an equally sized generated batch.

    Args:
        model: Model from build_gan
        class_samples: m x d matrix in scaled space
        config: GAN parameters (batch size, epochs, optimizers, learning rates)

    Returns:
        (trained model, per-epoch loss log)

    Raises:
        DegenerateClass: If m < 2
        NonFiniteLoss: If a loss stops being finite; no NaN parameters are returned
    """
    samples = np.asarray(class_samples, dtype=np.float64)
    if samples.ndim != 2 or samples.shape[1] != model.n_features:
        raise DimensionMismatch(f"Expected samples of width {model.n_features}, got shape {samples.shape}")
    m = samples.shape[0]
    if m < 2:
        raise DegenerateClass(model.class_label, m)

    log = TrainLog(class_label=model.class_label)
    if config.max_iter == 0:
        return model, log

    rng = np.random.default_rng(derive_seed(model.rng_seed, _TRAINING_STREAM))
    batch_size = min(config.batch_size, m)
    generator, discriminator = model.generator, model.discriminator
    g_state = make_optimizer(config.generator_optimizer, generator.parameters(), config.generator_learning_rate)
    d_state = make_optimizer(config.discriminator_optimizer, discriminator.parameters(),
                             config.discriminator_learning_rate)

    logger.debug(f"Training GAN for class {model.class_label!r}: {m} samples, "
                 f"batch size {batch_size}, {config.max_iter} epoch(s)")

    for epoch in range(1, config.max_iter + 1):
        order = rng.permutation(m)
        d_total, g_total, n_batches = 0.0, 0.0, 0

        for start in range(0, m, batch_size):
            real = samples[order[start:start + batch_size]]
            size = real.shape[0]

            fake = forward(generator, rng.standard_normal((size, model.coding_size)))[0]
            discriminator, d_state, d_loss = _discriminator_step(discriminator, d_state, real, fake)

            noise = rng.standard_normal((size, model.coding_size))
            generator, g_state, g_loss = _generator_step(generator, discriminator, g_state, noise)

            n_batches += 1
            if not (np.isfinite(d_loss) and np.isfinite(g_loss)) \
                    or not (generator.all_finite() and discriminator.all_finite()):
                raise NonFiniteLoss(epoch, n_batches, d_loss, g_loss, model.class_label)

            d_total += d_loss
            g_total += g_loss

        log.record(d_total / n_batches, g_total / n_batches, n_batches)
        logger.debug(
            f"class={model.class_label!r} epoch={epoch} d_loss={log.d_losses[-1]:.6f} g_loss={log.g_losses[-1]:.6f}",
            extra={'class_label': str(model.class_label), 'epoch': epoch,
                   'd_loss': log.d_losses[-1], 'g_loss': log.g_losses[-1]},
        )

    trained = GanModel(model.class_label, generator, discriminator, model.coding_size, model.rng_seed)
    return trained, log


def generate(model: GanModel, n: int, noise_seed: int) -> np.ndarray:
    """
    Draw n synthetic rows in scaled space

    Args:
        model: Trained (or untrained) model
        n: Number of rows (>= 0)
        noise_seed: Seed for the latent gaussian noise

    Returns:
        n x d matrix with every value inside (-1, 1)
    """
    if n < 0:
        raise ValueError(f"Cannot generate a negative number of samples: {n}")
    if n == 0:
        return np.empty((0, model.n_features))
    rng = np.random.default_rng(noise_seed)
    noise = rng.standard_normal((int(n), model.coding_size))
    return forward(model.generator, noise)[0]


def save_gan_model(model: GanModel, directory: Union[str, Path]) -> str:
    """Write generator.npz, discriminator.npz and model.json into directory"""
    output_dir = Path(directory)
    output_dir.mkdir(parents=True, exist_ok=True)
    save_network(model.generator, output_dir / 'generator.npz')
    save_network(model.discriminator, output_dir / 'discriminator.npz')
    meta = {'class_label': model.class_label, 'coding_size': model.coding_size, 'rng_seed': model.rng_seed}
    with open(output_dir / 'model.json', 'w', encoding='utf-8') as f:
        json.dump(meta, f, indent=2, sort_keys=True)
    return str(output_dir)


def load_gan_model(directory: Union[str, Path]) -> GanModel:
    """Read a model written by save_gan_model"""
    model_dir = Path(directory)
    with open(model_dir / 'model.json', 'r', encoding='utf-8') as f:
        meta = json.load(f)
    return GanModel(
        meta['class_label'],
        load_network(model_dir / 'generator.npz'),
        load_network(model_dir / 'discriminator.npz'),
        int(meta['coding_size']),
        int(meta['rng_seed']),
    )
