"""Tree ensembles: bootstrap random forests and SAMME-style boosting."""
from __future__ import annotations

import math

import numpy as np

from ..errors import TrainingError
from .base import LabeledDataset, Model, TrainConfig
from .tree import TreeNodes, grow_tree

_BOOST_EPS = 1e-10


class RandomForestModel(Model):
    kind = "rforest"
    supports_probability = True

    def __init__(self, label_list, feature_dim, trees, tree_seeds):
        super().__init__(label_list, feature_dim)
        self.trees = list(trees)
        self.tree_seeds = [int(s) for s in tree_seeds]

    def _tree_dists(self, v):
        lookup = dict(v.entries)
        reader = lambda f: lookup.get(int(f), 0.0)
        return np.vstack([tree.leaf_dist(reader) for tree in self.trees])

    def scores(self, v):
        """Plurality vote counts over the trees' predicted labels."""
        dists = self._tree_dists(v)
        votes = np.argmax(dists, axis=1)
        return np.bincount(votes, minlength=len(self.label_list)).astype(np.float64)

    def proba(self, v):
        self.check_vector(v)
        return self._tree_dists(v).mean(axis=0)

    def params_payload(self):
        return {
            "trees": [tree.payload() for tree in self.trees],
            "tree_seeds": self.tree_seeds,
        }

    @classmethod
    def from_payload(cls, label_list, feature_dim, params):
        trees = [TreeNodes.from_payload(p) for p in params["trees"]]
        return cls(label_list, feature_dim, trees, params["tree_seeds"])


def train_rforest(data: LabeledDataset, cfg: TrainConfig) -> RandomForestModel:
    """Grow ``forest_trees`` CARTs on bootstrap multiplicity weights.

    Per-tree seeds come from spawning the master seed through a seed
    sequence, so any tree can be regrown independently of the others.
    """
    X = data.to_matrix().tocsc()
    y = np.asarray(data.labels)
    n, n_features = X.shape
    if cfg.forest_max_features == "sqrt":
        max_features = max(1, math.isqrt(n_features))
    elif cfg.forest_max_features == "all":
        max_features = None
    else:
        max_features = min(int(cfg.forest_max_features), n_features)
    tree_seeds = np.random.SeedSequence(cfg.seed).generate_state(cfg.forest_trees)
    trees = []
    for seed in tree_seeds:
        rng = np.random.default_rng(int(seed))
        if cfg.forest_bootstrap:
            draws = rng.integers(0, n, size=n)
            weights = np.bincount(draws, minlength=n).astype(np.float64)
        else:
            weights = np.ones(n)
        trees.append(
            grow_tree(
                X, y, weights, len(data.label_list),
                max_depth=cfg.tree_max_depth,
                min_split=cfg.tree_min_split,
                max_features=max_features,
                rng=rng,
            )
        )
    return RandomForestModel(data.label_list, data.dim, trees, tree_seeds)


class AdaBoostModel(Model):
    kind = "adaboost"
    supports_probability = True

    def __init__(self, label_list, feature_dim, alphas, stumps):
        super().__init__(label_list, feature_dim)
        self.alphas = [float(a) for a in alphas]
        self.stumps = list(stumps)

    def scores(self, v):
        """Stage-weight mass per label; zero scores when no stage survived."""
        totals = np.zeros(len(self.label_list))
        lookup = dict(v.entries)
        reader = lambda f: lookup.get(int(f), 0.0)
        for alpha, stump in zip(self.alphas, self.stumps):
            totals[int(np.argmax(stump.leaf_dist(reader)))] += alpha
        return totals

    def proba(self, v):
        self.check_vector(v)
        totals = self.scores(v)
        weight = totals.sum()
        if weight <= 0:
            return np.full(len(self.label_list), 1.0 / len(self.label_list))
        return totals / weight

    def params_payload(self):
        return {
            "alphas": self.alphas,
            "stumps": [stump.payload() for stump in self.stumps],
        }

    @classmethod
    def from_payload(cls, label_list, feature_dim, params):
        stumps = [TreeNodes.from_payload(p) for p in params["stumps"]]
        return cls(label_list, feature_dim, params["alphas"], stumps)


def _stump_predictions(stump: TreeNodes, X_csc) -> np.ndarray:
    """Vectorized root-split predictions for every row of the matrix."""
    n = X_csc.shape[0]
    if stump.feature[0] == -1:
        return np.full(n, int(np.argmax(stump.dist[0])), dtype=np.int64)
    feature = int(stump.feature[0])
    start, end = X_csc.indptr[feature], X_csc.indptr[feature + 1]
    values = np.zeros(n)
    values[X_csc.indices[start:end]] = X_csc.data[start:end]
    left_label = int(np.argmax(stump.dist[stump.left[0]]))
    right_label = int(np.argmax(stump.dist[stump.right[0]]))
    return np.where(values <= stump.threshold[0], left_label, right_label)


def train_adaboost(data: LabeledDataset, cfg: TrainConfig) -> AdaBoostModel:
    """Multi-class boosting of depth-1 stumps.

    Stage weight alpha = ln((1-err)/err) + ln(K-1). A perfect stage (err 0)
    is kept with a capped alpha and stops the run; a stage no better than
    random guessing (err >= 1 - 1/K) is discarded and stops the run.
    """
    X = data.to_matrix().tocsc()
    y = np.asarray(data.labels)
    n = X.shape[0]
    n_labels = len(data.label_list)
    if n_labels < 2:
        raise TrainingError("adaboost needs at least two distinct labels")
    weights = np.full(n, 1.0 / n)
    alphas, stumps = [], []
    for _ in range(cfg.ada_stages):
        stump = grow_tree(
            X, y, weights, n_labels, max_depth=1, min_split=cfg.tree_min_split
        )
        miss = _stump_predictions(stump, X) != y
        err = float(weights[miss].sum() / weights.sum())
        if err >= 1.0 - 1.0 / n_labels:
            break
        if err < _BOOST_EPS:
            alphas.append(
                math.log((1 - _BOOST_EPS) / _BOOST_EPS) + math.log(n_labels - 1)
            )
            stumps.append(stump)
            break
        alphas.append(math.log((1 - err) / err) + math.log(n_labels - 1))
        stumps.append(stump)
        weights = weights * np.exp(alphas[-1] * miss)
        weights /= weights.sum()
    return AdaBoostModel(data.label_list, data.dim, alphas, stumps)
