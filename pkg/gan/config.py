"""
GAN oversampler parameters
"""

import dataclasses
import logging
from dataclasses import dataclass, fields
from typing import Any, Dict, Hashable, Mapping, Tuple, Union

from networks.activations import HIDDEN_ACTIVATIONS
from networks.optimizers import OPTIMIZERS
from utils.errors import InvalidCodingSize, InvalidConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GanConfig:
    """
    The single tuning surface of the oversampler

    Attributes:
        minor_classes: 'all', or the labels of the classes to oversample
        coding_size: Latent gaussian noise width; 'auto' = half the feature count
        batch_size: Minibatch size for minibatch gradient descent
        max_iter: Number of epochs
        generator_hidden_layer_sizes: Generator hidden widths (ascending recommended)
        discriminator_hidden_layer_sizes: Discriminator hidden widths (descending recommended)
        generator_hidden_layer_activation: Generator hidden activation
        discriminator_hidden_layer_activation: Discriminator hidden activation
        generator_optimizer: Generator optimizer name
        discriminator_optimizer: Discriminator optimizer name
        generator_learning_rate: Generator learning rate
        discriminator_learning_rate: Discriminator learning rate
        random_seed: Seed for every random stream
        n_jobs: Number of classes trained concurrently
    """

    minor_classes: Union[str, Tuple[Hashable, ...]] = 'all'
    coding_size: Union[str, int] = 'auto'
    batch_size: int = 32
    max_iter: int = 10
    generator_hidden_layer_sizes: Tuple[int, ...] = (100, 200, 300, 400, 500)
    discriminator_hidden_layer_sizes: Tuple[int, ...] = (500, 400, 300, 200, 100)
    generator_hidden_layer_activation: str = 'selu'
    discriminator_hidden_layer_activation: str = 'selu'
    generator_optimizer: str = 'adam'
    discriminator_optimizer: str = 'adam'
    generator_learning_rate: float = 1e-4
    discriminator_learning_rate: float = 1e-4
    random_seed: int = 42
    n_jobs: int = 1

    def __post_init__(self):
        # lists from JSON become tuples so the config stays hashable
        if not isinstance(self.minor_classes, str):
            object.__setattr__(self, 'minor_classes', tuple(self.minor_classes))
        for name in ('generator_hidden_layer_sizes', 'discriminator_hidden_layer_sizes'):
            value = getattr(self, name)
            if isinstance(value, (list, tuple)):
                object.__setattr__(self, name, tuple(value))
        self.validate()

    def validate(self):
        """
        Check every parameter before any work starts

        Raises:
            InvalidConfig: If a parameter is out of range or of the wrong type
            InvalidCodingSize: If an explicit coding size is below 1
        """
        if isinstance(self.minor_classes, str):
            if self.minor_classes != 'all':
                raise InvalidConfig(f"minor_classes must be 'all' or a list of labels, got {self.minor_classes!r}")
        elif not self.minor_classes:
            raise InvalidConfig("minor_classes list must not be empty")

        if isinstance(self.coding_size, str):
            if self.coding_size != 'auto':
                raise InvalidConfig(f"coding_size must be 'auto' or a positive integer, got {self.coding_size!r}")
        elif not _is_int(self.coding_size):
            raise InvalidConfig(f"coding_size must be 'auto' or a positive integer, got {self.coding_size!r}")
        elif self.coding_size < 1:
            raise InvalidCodingSize(f"coding_size must be at least 1, got {self.coding_size}")

        if not _is_int(self.batch_size) or self.batch_size < 1:
            raise InvalidConfig(f"batch_size must be an integer >= 1, got {self.batch_size!r}")
        if not _is_int(self.max_iter) or self.max_iter < 0:
            raise InvalidConfig(f"max_iter must be an integer >= 0, got {self.max_iter!r}")

        for name in ('generator_hidden_layer_sizes', 'discriminator_hidden_layer_sizes'):
            sizes = getattr(self, name)
            if not isinstance(sizes, tuple) or not sizes or not all(_is_int(s) and s >= 1 for s in sizes):
                raise InvalidConfig(f"{name} must be a non-empty list of positive integers, got {sizes!r}")

        for name in ('generator_hidden_layer_activation', 'discriminator_hidden_layer_activation'):
            if getattr(self, name) not in HIDDEN_ACTIVATIONS:
                raise InvalidConfig(
                    f"{name} must be one of {', '.join(HIDDEN_ACTIVATIONS)}, got {getattr(self, name)!r}"
                )

        for name in ('generator_optimizer', 'discriminator_optimizer'):
            if getattr(self, name) not in OPTIMIZERS:
                raise InvalidConfig(f"{name} must be one of {', '.join(OPTIMIZERS)}, got {getattr(self, name)!r}")

        for name in ('generator_learning_rate', 'discriminator_learning_rate'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not value > 0:
                raise InvalidConfig(f"{name} must be a positive number, got {value!r}")

        if not _is_int(self.random_seed) or self.random_seed < 0:
            raise InvalidConfig(f"random_seed must be a non-negative integer, got {self.random_seed!r}")
        if not _is_int(self.n_jobs) or self.n_jobs < 1:
            raise InvalidConfig(f"n_jobs must be an integer >= 1, got {self.n_jobs!r}")

    @classmethod
    def keys(cls) -> Tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any], base: 'GanConfig' = None) -> 'GanConfig':
        """
        Build a config from a mapping of parameter names

        Args:
            values: Parameter overrides keyed by parameter name
            base: Config supplying every value not in the mapping (defaults otherwise)

        Raises:
            InvalidConfig: On unknown keys or invalid values
        """
        unknown = set(values) - set(cls.keys())
        if unknown:
            raise InvalidConfig(f"Unknown GAN parameter(s): {', '.join(sorted(unknown))}")
        base = base or cls()
        try:
            return dataclasses.replace(base, **dict(values))
        except TypeError as e:
            raise InvalidConfig(str(e)) from e

    def replace(self, **changes) -> 'GanConfig':
        return GanConfig.from_mapping(changes, base=self)

    def to_dict(self, include_n_jobs: bool = True) -> Dict[str, Any]:
        """JSON-ready mapping keyed by parameter name"""
        result = {}
        for f in fields(self):
            if f.name == 'n_jobs' and not include_n_jobs:
                continue
            value = getattr(self, f.name)
            result[f.name] = list(value) if isinstance(value, tuple) else value
        return result

    def check_layer_order(self) -> bool:
        """
        Warn when the recommended layer ordering is not followed

        Generator widths should grow toward the output and discriminator
        widths should shrink; other orderings are allowed.

        Returns:
            True if both orderings follow the recommendation
        """
        ok = True
        gen = self.generator_hidden_layer_sizes
        disc = self.discriminator_hidden_layer_sizes
        if any(a > b for a, b in zip(gen, gen[1:])):
            logger.warning(f"generator_hidden_layer_sizes {list(gen)} are not in ascending order")
            ok = False
        if any(a < b for a, b in zip(disc, disc[1:])):
            logger.warning(f"discriminator_hidden_layer_sizes {list(disc)} are not in descending order")
            ok = False
        return ok


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def resolve_coding_size(config: GanConfig, d: int) -> int:
    """
    Latent noise width for a dataset with d features

    Args:
        config: GAN parameters
        d: Feature count (>= 1)

    Returns:
        The explicit coding size, or max(1, d // 2) for 'auto'

    Raises:
        InvalidCodingSize: If an explicit value is below 1
    """
    if config.coding_size == 'auto':
        return max(1, int(d) // 2)
    if not _is_int(config.coding_size) or config.coding_size < 1:
        raise InvalidCodingSize(f"coding_size must be at least 1, got {config.coding_size!r}")
    return int(config.coding_size)
