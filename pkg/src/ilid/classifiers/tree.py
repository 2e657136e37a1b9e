"""CART decision trees over sparse features, with sample weights.

Splits minimize weighted Gini impurity. Candidate thresholds are midpoints
between consecutive distinct observed values of a feature (absent sparse
entries count as 0); rows with value <= threshold go left. Equal-gain ties
prefer the lower feature index, and within a feature the lowest threshold.
A node becomes a leaf when pure, at max depth, below the minimum split size,
or when the best achievable impurity decrease is not above a tiny epsilon.

The same grower serves the plain decision tree (all features, no
randomness), random forest trees (per-node feature subsets, bootstrap
weights), and boosting stumps (depth 1, stage weights).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import LabeledDataset, Model, TrainConfig

_MIN_GAIN = 1e-12


@dataclass(frozen=True)
class TreeNodes:
    """Flat node arrays; feature == -1 marks a leaf, children as -1 there."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    dist: np.ndarray  # (n_nodes, n_labels) label distribution at the node

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def leaf_dist(self, value_of) -> np.ndarray:
        """Walk from the root; ``value_of(feature) -> float`` reads the vector."""
        node = 0
        while self.feature[node] != -1:
            if value_of(self.feature[node]) <= self.threshold[node]:
                node = self.left[node]
            else:
                node = self.right[node]
        return self.dist[node]

    def payload(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "dist": self.dist.tolist(),
        }

    @classmethod
    def from_payload(cls, params) -> "TreeNodes":
        return cls(
            feature=np.asarray(params["feature"], dtype=np.int64),
            threshold=np.asarray(params["threshold"], dtype=np.float64),
            left=np.asarray(params["left"], dtype=np.int64),
            right=np.asarray(params["right"], dtype=np.int64),
            dist=np.asarray(params["dist"], dtype=np.float64),
        )


def _column_in_node(X_csc, feature, stamp_array, stamp, position_map):
    """Non-zero rows of a column restricted to the current node's samples.

    Returns (local positions, values) where local positions index into the
    node's sample-index array.
    """
    start, end = X_csc.indptr[feature], X_csc.indptr[feature + 1]
    rows = X_csc.indices[start:end]
    vals = X_csc.data[start:end]
    member = stamp_array[rows] == stamp
    return position_map[rows[member]], vals[member]


def _best_split_of_column(values, classes, weights, n_node, node_class_w, n_labels):
    """Best (gain, threshold) for one feature within a node, or None.

    ``values``/``classes``/``weights`` describe the node rows with non-zero
    feature value; the remaining ``n_node - len(values)`` rows sit at 0.
    """
    m = len(values)
    if m == 0:
        return None
    order = np.argsort(values, kind="stable")
    v = values[order]
    starts = np.concatenate(
        (np.zeros(1, dtype=np.int64), np.flatnonzero(v[1:] != v[:-1]) + 1)
    )
    one_hot = np.zeros((m, n_labels))
    one_hot[np.arange(m), classes[order]] = weights[order]
    group_w = np.add.reduceat(one_hot, starts, axis=0)
    group_vals = v[starts]
    n_zero = n_node - m
    if n_zero > 0:
        zero_class_w = node_class_w - group_w.sum(axis=0)
        position = int(np.searchsorted(group_vals, 0.0))
        group_vals = np.concatenate(
            (group_vals[:position], np.zeros(1), group_vals[position:])
        )
        group_w = np.concatenate(
            (group_w[:position], zero_class_w[None, :], group_w[position:])
        )
    if len(group_vals) < 2:
        return None
    prefix = np.cumsum(group_w, axis=0)
    total_class_w = prefix[-1]
    total_w = total_class_w.sum()
    left_w = prefix.sum(axis=1)
    right_w = total_w - left_w
    left_sq = (prefix**2).sum(axis=1)
    right_sq = ((total_class_w - prefix) ** 2).sum(axis=1)
    left_term = left_w - left_sq / np.where(left_w > 0, left_w, 1.0)
    right_term = right_w - right_sq / np.where(right_w > 0, right_w, 1.0)
    parent = (
        total_w - (total_class_w**2).sum() / total_w if total_w > 0 else 0.0
    )
    gains = parent - (left_term + right_term)[:-1]
    best = int(np.argmax(gains))
    thresholds = (group_vals[:-1] + group_vals[1:]) / 2.0
    return float(gains[best]), float(thresholds[best])


def grow_tree(
    X_csc,
    y,
    sample_weight,
    n_labels,
    max_depth,
    min_split,
    max_features=None,
    rng=None,
) -> TreeNodes:
    """Grow one CART tree; deterministic given inputs and the rng state.

    ``max_features`` limits the per-node candidate features (sampled without
    replacement from ``rng``); None considers every feature. Nodes are built
    depth-first, left child first, which pins the rng consumption order.
    """
    n, n_features = X_csc.shape
    y = np.asarray(y, dtype=np.int64)
    sample_weight = np.asarray(sample_weight, dtype=np.float64)
    X_csr = X_csc.tocsr()
    feature_col, threshold_col = [], []
    left_col, right_col, dist_col = [], [], []
    stamp_array = np.full(n, -1, dtype=np.int64)
    position_map = np.zeros(n, dtype=np.int64)
    stamp_counter = 0

    def new_node():
        feature_col.append(-1)
        threshold_col.append(0.0)
        left_col.append(-1)
        right_col.append(-1)
        dist_col.append(None)
        return len(feature_col) - 1

    root = new_node()
    stack = [(np.arange(n, dtype=np.int64), 0, root)]
    while stack:
        idx, depth, node = stack.pop()
        stamp_counter += 1
        stamp_array[idx] = stamp_counter
        position_map[idx] = np.arange(len(idx))
        w = sample_weight[idx]
        class_w = np.bincount(y[idx], weights=w, minlength=n_labels)
        total = class_w.sum()
        dist_col[node] = (
            class_w / total if total > 0 else np.full(n_labels, 1.0 / n_labels)
        )
        pure = np.count_nonzero(class_w) <= 1
        if pure or depth >= max_depth or len(idx) < min_split:
            continue
        # Columns that are all-zero within the node have a single distinct
        # value and can never split, so only the node's active columns are
        # scanned. The rng is consumed before this pruning, keeping its
        # stream independent of the data.
        active = np.unique(X_csr[idx].indices) if len(idx) < n else None
        if max_features is not None and max_features < n_features:
            sampled = np.sort(
                rng.choice(n_features, size=max_features, replace=False)
            )
            candidates = (
                sampled if active is None
                else np.intersect1d(sampled, active, assume_unique=True)
            )
        elif active is not None:
            candidates = active
        else:
            candidates = np.flatnonzero(np.diff(X_csc.indptr))
        best_gain, best_feature, best_threshold = _MIN_GAIN, -1, 0.0
        for feature in candidates:
            local, vals = _column_in_node(
                X_csc, feature, stamp_array, stamp_counter, position_map
            )
            found = _best_split_of_column(
                vals, y[idx][local], w[local], len(idx), class_w, n_labels
            )
            if found is not None and found[0] > best_gain:
                best_gain, best_threshold = found
                best_feature = feature
        if best_feature < 0:
            continue
        local, vals = _column_in_node(
            X_csc, best_feature, stamp_array, stamp_counter, position_map
        )
        node_values = np.zeros(len(idx))
        node_values[local] = vals
        go_left = node_values <= best_threshold
        left_node = new_node()
        right_node = new_node()
        feature_col[node] = best_feature
        threshold_col[node] = best_threshold
        left_col[node] = left_node
        right_col[node] = right_node
        # Right pushed first so the left child is grown (and numbered) next.
        stack.append((idx[~go_left], depth + 1, right_node))
        stack.append((idx[go_left], depth + 1, left_node))
    return TreeNodes(
        feature=np.asarray(feature_col, dtype=np.int64),
        threshold=np.asarray(threshold_col, dtype=np.float64),
        left=np.asarray(left_col, dtype=np.int64),
        right=np.asarray(right_col, dtype=np.int64),
        dist=np.vstack(dist_col),
    )


class DecisionTreeModel(Model):
    kind = "dtree"
    supports_probability = True

    def __init__(self, label_list, feature_dim, nodes: TreeNodes):
        super().__init__(label_list, feature_dim)
        self.nodes = nodes

    def _leaf_dist(self, v):
        lookup = dict(v.entries)
        return self.nodes.leaf_dist(lambda f: lookup.get(int(f), 0.0))

    def scores(self, v):
        return self._leaf_dist(v)

    def proba(self, v):
        self.check_vector(v)
        return self._leaf_dist(v)

    def params_payload(self):
        return {"nodes": self.nodes.payload()}

    @classmethod
    def from_payload(cls, label_list, feature_dim, params):
        return cls(label_list, feature_dim, TreeNodes.from_payload(params["nodes"]))


def train_dtree(data: LabeledDataset, cfg: TrainConfig) -> DecisionTreeModel:
    X = data.to_matrix().tocsc()
    nodes = grow_tree(
        X,
        np.asarray(data.labels),
        np.ones(len(data)),
        len(data.label_list),
        max_depth=cfg.tree_max_depth,
        min_split=cfg.tree_min_split,
    )
    return DecisionTreeModel(data.label_list, data.dim, nodes)
