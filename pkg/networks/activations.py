"""
Activation functions, their derivatives, and the losses used for training
"""

from typing import Callable, Dict

import numpy as np

# Standard self-normalizing constants
SELU_LAMBDA = 1.0507009873554805
SELU_ALPHA = 1.6732632423543772

# Probabilities are clamped here before taking logs
BCE_CLAMP = 1e-7

# Largest float64 below 1; keeps sigmoid/tanh outputs inside their open ranges
_OPEN_UPPER = float(np.nextafter(1.0, 0.0))
_TINY = float(np.finfo(np.float64).tiny)

ACTIVATIONS = ('selu', 'sigmoid', 'tanh', 'linear', 'softmax')
HIDDEN_ACTIVATIONS = ('selu', 'sigmoid', 'tanh', 'linear')


def selu(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return SELU_LAMBDA * np.where(x > 0, x, SELU_ALPHA * np.expm1(np.minimum(x, 0.0)))


def selu_grad(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return np.where(x > 0, SELU_LAMBDA, SELU_LAMBDA * SELU_ALPHA * np.exp(np.minimum(x, 0.0)))


def sigmoid(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    e = np.exp(-np.abs(x))
    out = np.where(x >= 0, 1.0 / (1.0 + e), e / (1.0 + e))
    return np.clip(out, _TINY, _OPEN_UPPER)


def tanh(x: np.ndarray) -> np.ndarray:
    return np.clip(np.tanh(np.asarray(x, dtype=np.float64)), -_OPEN_UPPER, _OPEN_UPPER)


def linear(x: np.ndarray) -> np.ndarray:
    return np.asarray(x, dtype=np.float64)


def softmax(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    shifted = np.exp(x - x.max(axis=1, keepdims=True))
    return shifted / shifted.sum(axis=1, keepdims=True)


_FORWARD: Dict[str, Callable[[np.ndarray], np.ndarray]] = {
    'selu': selu,
    'sigmoid': sigmoid,
    'tanh': tanh,
    'linear': linear,
    'softmax': softmax,
}


def activate(tag: str, z: np.ndarray) -> np.ndarray:
    """Apply the activation named by tag"""
    return _FORWARD[tag](z)


def activation_backward(tag: str, z: np.ndarray, a: np.ndarray, upstream: np.ndarray) -> np.ndarray:
    """
    Push an upstream gradient through an activation

    Args:
        tag: Activation name
        z: Pre-activation values
        a: Post-activation values (activate(tag, z))
        upstream: Gradient of the loss with respect to a

    Returns:
        Gradient of the loss with respect to z
    """
    if tag == 'linear':
        return upstream
    if tag == 'selu':
        return upstream * selu_grad(z)
    if tag == 'sigmoid':
        return upstream * a * (1.0 - a)
    if tag == 'tanh':
        return upstream * (1.0 - a * a)
    if tag == 'softmax':
        # Jacobian-vector product of the row-wise softmax
        return a * (upstream - np.sum(upstream * a, axis=1, keepdims=True))
    raise KeyError(tag)


# =============================================================================
# Losses
# =============================================================================

def _clamp(p: np.ndarray) -> np.ndarray:
    return np.clip(np.asarray(p, dtype=np.float64), BCE_CLAMP, 1.0 - BCE_CLAMP)


def bce_loss(predictions: np.ndarray, labels: np.ndarray) -> float:
    """Mean binary cross-entropy with probabilities clamped to [1e-7, 1 - 1e-7]"""
    p = _clamp(predictions)
    y = np.asarray(labels, dtype=np.float64).reshape(p.shape)
    return float(np.mean(-(y * np.log(p) + (1.0 - y) * np.log(1.0 - p))))


def bce_gradient(predictions: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Per-sample derivative of the binary cross-entropy with respect to the prediction"""
    p = _clamp(predictions)
    y = np.asarray(labels, dtype=np.float64).reshape(p.shape)
    return (p - y) / (p * (1.0 - p))


def cross_entropy_loss(probabilities: np.ndarray, one_hot: np.ndarray) -> float:
    """Mean categorical cross-entropy over rows"""
    p = np.clip(np.asarray(probabilities, dtype=np.float64), BCE_CLAMP, 1.0)
    return float(np.mean(-np.sum(one_hot * np.log(p), axis=1)))


def cross_entropy_gradient(probabilities: np.ndarray, one_hot: np.ndarray) -> np.ndarray:
    """Per-sample derivative of the categorical cross-entropy with respect to the probabilities"""
    p = np.clip(np.asarray(probabilities, dtype=np.float64), BCE_CLAMP, 1.0)
    return -np.asarray(one_hot, dtype=np.float64) / p
