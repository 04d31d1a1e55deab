"""
Dense feed-forward networks
Forward pass, exact backpropagation and LeCun-normal initialization
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from networks.activations import ACTIVATIONS, activate, activation_backward
from utils.errors import CacheMismatch, DimensionMismatch, InvalidArchitecture, ShapeMismatch


@dataclass(frozen=True, eq=False)
class DenseLayer:
    """Affine map followed by an activation"""

    weights: np.ndarray  # d_in x d_out
    bias: np.ndarray     # d_out
    activation: str

    @property
    def fan_in(self) -> int:
        return self.weights.shape[0]

    @property
    def fan_out(self) -> int:
        return self.weights.shape[1]


@dataclass(frozen=True, eq=False)
class DenseNetwork:
    """Ordered stack of dense layers whose dimensions chain"""

    layers: Tuple[DenseLayer, ...]

    def __post_init__(self):
        layers = tuple(self.layers)
        if not layers:
            raise InvalidArchitecture("A network needs at least one layer")
        for k, layer in enumerate(layers):
            if layer.activation not in ACTIVATIONS:
                raise InvalidArchitecture(f"Unknown activation {layer.activation!r} in layer {k}")
            if layer.weights.ndim != 2 or layer.bias.shape != (layer.fan_out,):
                raise InvalidArchitecture(f"Layer {k} has inconsistent weight/bias shapes")
            if k > 0 and layers[k - 1].fan_out != layer.fan_in:
                raise InvalidArchitecture(
                    f"Layer {k - 1} outputs {layers[k - 1].fan_out} units but layer {k} expects {layer.fan_in}"
                )
        object.__setattr__(self, 'layers', layers)

    @property
    def layer_sizes(self) -> List[int]:
        return [self.layers[0].fan_in] + [layer.fan_out for layer in self.layers]

    @property
    def activations(self) -> List[str]:
        return [layer.activation for layer in self.layers]

    @property
    def input_size(self) -> int:
        return self.layers[0].fan_in

    @property
    def output_size(self) -> int:
        return self.layers[-1].fan_out

    def parameters(self) -> List[np.ndarray]:
        """Flat parameter list [W0, b0, W1, b1, ...]"""
        params = []
        for layer in self.layers:
            params.extend([layer.weights, layer.bias])
        return params

    def with_parameters(self, params: Sequence[np.ndarray]) -> 'DenseNetwork':
        """Same architecture with new parameter arrays (ordered as parameters())"""
        if len(params) != 2 * len(self.layers):
            raise ShapeMismatch(f"Expected {2 * len(self.layers)} parameter arrays, got {len(params)}")
        layers = []
        for k, layer in enumerate(self.layers):
            weights, bias = params[2 * k], params[2 * k + 1]
            if weights.shape != layer.weights.shape or bias.shape != layer.bias.shape:
                raise ShapeMismatch(f"Parameter shapes for layer {k} do not match the network")
            layers.append(DenseLayer(weights, bias, layer.activation))
        return DenseNetwork(tuple(layers))

    def all_finite(self) -> bool:
        return all(np.all(np.isfinite(p)) for p in self.parameters())

    def forward(self, batch: np.ndarray) -> Tuple[np.ndarray, 'ForwardCache']:
        return forward(self, batch)

    def predict(self, batch: np.ndarray) -> np.ndarray:
        return forward(self, batch)[0]


@dataclass(frozen=True, eq=False)
class ForwardCache:
    """Per-layer inputs, pre-activations and outputs recorded by forward()"""

    inputs: Tuple[np.ndarray, ...]
    pre_activations: Tuple[np.ndarray, ...]
    outputs: Tuple[np.ndarray, ...]
    layer_sizes: Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Gradients:
    """
    Gradients of a batch-mean loss, shaped like the network's parameters

    Attributes:
        weights: Per-layer weight gradients (averaged over the batch)
        biases: Per-layer bias gradients (averaged over the batch)
        inputs: Per-sample gradient with respect to the network input (not averaged)
    """

    weights: Tuple[np.ndarray, ...]
    biases: Tuple[np.ndarray, ...]
    inputs: Optional[np.ndarray] = field(default=None)

    def as_list(self) -> List[np.ndarray]:
        """Flat list ordered like DenseNetwork.parameters()"""
        grads = []
        for dw, db in zip(self.weights, self.biases):
            grads.extend([dw, db])
        return grads

    def is_zero(self) -> bool:
        return all(not np.any(g) for g in self.as_list())


def init_network(layer_sizes: Sequence[int], hidden_activation: str = 'selu',
                 output_activation: str = 'linear', seed: int = 0) -> DenseNetwork:
    """
    Build a network with LeCun-normal weights and zero biases

    Args:
        layer_sizes: Input size, hidden sizes..., output size
        hidden_activation: Activation for every layer but the last
        output_activation: Activation of the last layer
        seed: Seed for the weight draw

    Returns:
        Initialized DenseNetwork

    Raises:
        InvalidArchitecture: Fewer than 2 sizes, a size below 1, or an unknown activation
    """
    sizes = list(layer_sizes)
    if len(sizes) < 2:
        raise InvalidArchitecture(f"Need at least an input and an output size, got {sizes}")
    if any(isinstance(s, bool) or not isinstance(s, (int, np.integer)) or s < 1 for s in sizes):
        raise InvalidArchitecture(f"Layer sizes must be positive integers, got {sizes}")
    for tag in (hidden_activation, output_activation):
        if tag not in ACTIVATIONS:
            raise InvalidArchitecture(f"Unknown activation {tag!r}; choose from {', '.join(ACTIVATIONS)}")

    rng = np.random.default_rng(seed)
    layers = []
    for k, (fan_in, fan_out) in enumerate(zip(sizes[:-1], sizes[1:])):
        weights = rng.normal(0.0, 1.0 / np.sqrt(fan_in), size=(int(fan_in), int(fan_out)))
        bias = np.zeros(int(fan_out))
        activation = output_activation if k == len(sizes) - 2 else hidden_activation
        layers.append(DenseLayer(weights, bias, activation))
    return DenseNetwork(tuple(layers))


def forward(net: DenseNetwork, batch: np.ndarray) -> Tuple[np.ndarray, ForwardCache]:
    """
    Evaluate the network on a batch

    Args:
        net: Network to evaluate
        batch: m x d_in matrix

    Returns:
        (m x d_out output, cache for backward)

    Raises:
        DimensionMismatch: If the batch width differs from the input size
    """
    x = np.asarray(batch, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != net.input_size:
        raise DimensionMismatch(f"Network expects batches of width {net.input_size}, got shape {x.shape}")

    inputs, pres, outs = [], [], []
    for layer in net.layers:
        inputs.append(x)
        z = x @ layer.weights + layer.bias
        x = activate(layer.activation, z)
        pres.append(z)
        outs.append(x)

    cache = ForwardCache(tuple(inputs), tuple(pres), tuple(outs), tuple(net.layer_sizes))
    return x, cache


def backward(net: DenseNetwork, cache: ForwardCache, loss_gradient_at_output: np.ndarray) -> Gradients:
    """
    Reverse-mode chain rule through the network

    Args:
        net: Network that produced the cache
        cache: Cache from forward(net, batch)
        loss_gradient_at_output: m x d_out per-sample derivatives of the loss
            with respect to the network output

    Returns:
        Gradients of the batch-mean loss, plus per-sample input gradients

    Raises:
        CacheMismatch: If the cache does not come from a matching forward call
    """
    if tuple(net.layer_sizes) != cache.layer_sizes or len(cache.outputs) != len(net.layers):
        raise CacheMismatch("Cache was produced by a network with a different architecture")
    upstream = np.asarray(loss_gradient_at_output, dtype=np.float64)
    if upstream.shape != cache.outputs[-1].shape:
        raise CacheMismatch(
            f"Loss gradient shape {upstream.shape} does not match the cached output {cache.outputs[-1].shape}"
        )

    m = upstream.shape[0]
    weight_grads: List[np.ndarray] = [None] * len(net.layers)
    bias_grads: List[np.ndarray] = [None] * len(net.layers)

    for k in range(len(net.layers) - 1, -1, -1):
        layer = net.layers[k]
        delta = activation_backward(layer.activation, cache.pre_activations[k], cache.outputs[k], upstream)
        weight_grads[k] = cache.inputs[k].T @ delta / max(m, 1)
        bias_grads[k] = delta.sum(axis=0) / max(m, 1)
        upstream = delta @ layer.weights.T

    return Gradients(tuple(weight_grads), tuple(bias_grads), upstream)
