"""
Adam optimizer
"""

from dataclasses import dataclass, replace
from typing import List, Sequence, Tuple

import numpy as np

from utils.errors import InvalidConfig, ShapeMismatch

OPTIMIZERS = ('adam',)


@dataclass(frozen=True, eq=False)
class AdamState:
    """First/second moment accumulators and step counter for one parameter list"""

    learning_rate: float
    first_moments: Tuple[np.ndarray, ...]
    second_moments: Tuple[np.ndarray, ...]
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    @classmethod
    def create(cls, params: Sequence[np.ndarray], learning_rate: float,
               beta1: float = 0.9, beta2: float = 0.999, epsilon: float = 1e-8) -> 'AdamState':
        """Fresh state with zero accumulators shaped like params"""
        if not learning_rate > 0:
            raise InvalidConfig(f"Learning rate must be positive, got {learning_rate}")
        zeros = tuple(np.zeros_like(np.asarray(p, dtype=np.float64)) for p in params)
        return cls(float(learning_rate), zeros, tuple(np.zeros_like(z) for z in zeros),
                   0, beta1, beta2, epsilon)


def make_optimizer(name: str, params: Sequence[np.ndarray], learning_rate: float) -> AdamState:
    """Optimizer state for the configured optimizer name"""
    if name != 'adam':
        raise InvalidConfig(f"Unsupported optimizer {name!r}; choose from {', '.join(OPTIMIZERS)}")
    return AdamState.create(params, learning_rate)


def adam_step(state: AdamState, params: Sequence[np.ndarray],
              grads: Sequence[np.ndarray]) -> Tuple[List[np.ndarray], AdamState]:
    """
    One bias-corrected Adam update

    Coordinates whose gradient is exactly zero keep their value, so a
    zero-gradient step is the identity on parameters for any state.

    Args:
        state: Current optimizer state
        params: Parameter arrays
        grads: Gradient arrays shaped like params

    Returns:
        (updated parameter arrays, updated state with t + 1)

    Raises:
        ShapeMismatch: If params, grads and accumulators are not congruent
    """
    if len(params) != len(grads) or len(params) != len(state.first_moments):
        raise ShapeMismatch(
            f"Got {len(params)} parameter arrays, {len(grads)} gradients, "
            f"{len(state.first_moments)} accumulators"
        )

    t = state.t + 1
    correction1 = 1.0 - state.beta1 ** t
    correction2 = 1.0 - state.beta2 ** t

    new_params, new_m, new_v = [], [], []
    for p, g, m, v in zip(params, grads, state.first_moments, state.second_moments):
        p = np.asarray(p, dtype=np.float64)
        g = np.asarray(g, dtype=np.float64)
        if p.shape != g.shape or p.shape != m.shape:
            raise ShapeMismatch(f"Parameter shape {p.shape} vs gradient shape {g.shape}")

        m = state.beta1 * m + (1.0 - state.beta1) * g
        v = state.beta2 * v + (1.0 - state.beta2) * g * g
        update = state.learning_rate * (m / correction1) / (np.sqrt(v / correction2) + state.epsilon)

        new_params.append(np.where(g != 0.0, p - update, p))
        new_m.append(m)
        new_v.append(v)

    return new_params, replace(state, first_moments=tuple(new_m), second_moments=tuple(new_v), t=t)
