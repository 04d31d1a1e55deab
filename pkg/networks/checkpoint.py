"""
Network checkpoints
Layer sizes, activation tags and raw float64 parameters in a single .npz file
"""

from pathlib import Path
from typing import Union

import numpy as np

from networks.dense import DenseLayer, DenseNetwork
from utils.errors import InvalidConfig


def save_network(net: DenseNetwork, path: Union[str, Path]) -> str:
    """
    Write a network checkpoint; parameters are stored bit-exactly

    Args:
        net: Network to save
        path: Output .npz path

    Returns:
        Path of the written checkpoint
    """
    output_file = Path(path)
    output_file.parent.mkdir(parents=True, exist_ok=True)

    arrays = {
        'layer_sizes': np.asarray(net.layer_sizes, dtype=np.int64),
        'activations': np.asarray(net.activations, dtype=str),
    }
    for k, layer in enumerate(net.layers):
        arrays[f'W{k}'] = layer.weights
        arrays[f'b{k}'] = layer.bias

    with open(output_file, 'wb') as f:
        np.savez(f, **arrays)
    return str(output_file)


def load_network(path: Union[str, Path]) -> DenseNetwork:
    """
    Read a checkpoint written by save_network

    Raises:
        FileNotFoundError: If the checkpoint doesn't exist
        InvalidConfig: If the file is not a network checkpoint
    """
    checkpoint = Path(path)
    if not checkpoint.exists():
        raise FileNotFoundError(f"Checkpoint not found: {path}")

    with np.load(checkpoint, allow_pickle=False) as data:
        if 'layer_sizes' not in data or 'activations' not in data:
            raise InvalidConfig(f"{checkpoint} is not a network checkpoint")
        activations = [str(tag) for tag in data['activations']]
        layers = tuple(
            DenseLayer(np.array(data[f'W{k}']), np.array(data[f'b{k}']), tag)
            for k, tag in enumerate(activations)
        )

    return DenseNetwork(layers)
