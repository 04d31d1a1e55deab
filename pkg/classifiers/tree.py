"""
Depth-limited regression tree fitted to gradients and hessians

Split gain and leaf values follow the second-order boosting formulation:
gain = G_L^2/(H_L+l2) + G_R^2/(H_R+l2) - G^2/(H+l2), leaf = -G/(H+l2).
Candidate splits are evaluated from per-bin gradient/hessian histograms.
"""

from typing import List, Sequence

import numpy as np

# Minimum hessian mass on each side of a split
_MIN_HESSIAN = 1e-3
_MIN_GAIN = 1e-12


class RegressionTree:
    """Binary tree over binned features; internal nodes test `bin <= threshold`"""

    def __init__(self, max_depth: int = 3, min_samples_leaf: int = 5, l2_regularization: float = 1.0):
        self.max_depth = int(max_depth)
        self.min_samples_leaf = int(min_samples_leaf)
        self.l2_regularization = float(l2_regularization)

        self.feature: List[int] = []
        self.threshold: List[int] = []
        self.left: List[int] = []
        self.right: List[int] = []
        self.value: List[float] = []

    @property
    def n_nodes(self) -> int:
        return len(self.value)

    def _add_node(self, value: float) -> int:
        self.feature.append(-1)
        self.threshold.append(-1)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(value)
        return len(self.value) - 1

    def _leaf_value(self, g_sum: float, h_sum: float) -> float:
        return -g_sum / (h_sum + self.l2_regularization + _MIN_HESSIAN)

    def fit(self, binned: np.ndarray, gradients: np.ndarray, hessians: np.ndarray,
            n_bins: Sequence[int]) -> 'RegressionTree':
        """
        Grow the tree depth-first

        Args:
            binned: n x d bin indices
            gradients: n first-order gradients
            hessians: n second-order gradients
            n_bins: number of bins per feature
        """
        self._grow(binned, gradients, hessians, list(n_bins), np.arange(binned.shape[0]), 0)
        return self

    def _best_split(self, binned, gradients, hessians, n_bins, indices):
        g_node, h_node = gradients[indices], hessians[indices]
        g_sum, h_sum = g_node.sum(), h_node.sum()
        l2 = self.l2_regularization
        parent = g_sum ** 2 / (h_sum + l2)

        best_gain, best_feature, best_bin = _MIN_GAIN, -1, -1
        for j, bins in enumerate(n_bins):
            if bins < 2:
                continue
            column = binned[indices, j]
            g_hist = np.bincount(column, weights=g_node, minlength=bins)
            h_hist = np.bincount(column, weights=h_node, minlength=bins)
            c_hist = np.bincount(column, minlength=bins)

            g_left = np.cumsum(g_hist)[:-1]
            h_left = np.cumsum(h_hist)[:-1]
            c_left = np.cumsum(c_hist)[:-1]
            g_right, h_right, c_right = g_sum - g_left, h_sum - h_left, indices.shape[0] - c_left

            valid = ((c_left >= self.min_samples_leaf) & (c_right >= self.min_samples_leaf)
                     & (h_left >= _MIN_HESSIAN) & (h_right >= _MIN_HESSIAN))
            if not valid.any():
                continue

            gain = g_left ** 2 / (h_left + l2) + g_right ** 2 / (h_right + l2) - parent
            gain = np.where(valid, gain, -np.inf)
            t = int(np.argmax(gain))
            if gain[t] > best_gain:
                best_gain, best_feature, best_bin = float(gain[t]), j, t

        return best_feature, best_bin, g_sum, h_sum

    def _grow(self, binned, gradients, hessians, n_bins, indices, depth) -> int:
        feature, bin_threshold, g_sum, h_sum = self._best_split(binned, gradients, hessians, n_bins, indices)
        node = self._add_node(self._leaf_value(g_sum, h_sum))

        if depth >= self.max_depth or feature < 0:
            return node

        goes_left = binned[indices, feature] <= bin_threshold
        self.feature[node] = feature
        self.threshold[node] = bin_threshold
        self.left[node] = self._grow(binned, gradients, hessians, n_bins, indices[goes_left], depth + 1)
        self.right[node] = self._grow(binned, gradients, hessians, n_bins, indices[~goes_left], depth + 1)
        return node

    def predict_binned(self, binned: np.ndarray) -> np.ndarray:
        """Leaf value reached by every row"""
        feature = np.asarray(self.feature)
        threshold = np.asarray(self.threshold)
        left = np.asarray(self.left)
        right = np.asarray(self.right)
        value = np.asarray(self.value)

        rows = np.arange(binned.shape[0])
        node = np.zeros(binned.shape[0], dtype=np.intp)
        for _ in range(self.max_depth + 1):
            internal = left[node] >= 0
            if not internal.any():
                break
            active = node[internal]
            go_left = binned[rows[internal], feature[active]] <= threshold[active]
            node[internal] = np.where(go_left, left[active], right[active])
        return value[node]
