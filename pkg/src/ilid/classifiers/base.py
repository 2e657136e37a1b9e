"""Shared classifier infrastructure: dataset container, config, model base.

Every trained model exposes per-label decision scores; ``predict`` is the
argmax of those scores over the sorted label list, so score ties resolve to
the lexicographically smallest label — the one tie rule used throughout.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import TrainingError, ValidationError
from ..features import SparseVector, stack_vectors

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class LabeledDataset:
    """Uniform-dimension sparse vectors with integer labels.

    ``labels`` index into ``label_list``, which is sorted and duplicate-free.
    """

    vectors: tuple
    labels: tuple
    label_list: tuple

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(self.vectors))
        object.__setattr__(self, "labels", tuple(int(y) for y in self.labels))
        object.__setattr__(self, "label_list", tuple(self.label_list))
        if len(self.vectors) != len(self.labels):
            raise ValidationError("vectors and labels must have equal length")
        if list(self.label_list) != sorted(set(self.label_list)):
            raise ValidationError("label_list must be sorted and duplicate-free")
        for y in self.labels:
            if not 0 <= y < len(self.label_list):
                raise ValidationError(f"label index {y} out of range")
        dims = {v.dim for v in self.vectors}
        if len(dims) > 1:
            raise ValidationError(f"vectors must share a dimension, got {sorted(dims)}")

    @property
    def dim(self) -> int:
        return self.vectors[0].dim if self.vectors else 0

    def __len__(self):
        return len(self.vectors)

    @classmethod
    def from_pairs(cls, vectors, label_strings, label_list=None):
        """Build a dataset from parallel vectors and label strings."""
        label_strings = list(label_strings)
        if label_list is None:
            label_list = sorted(set(label_strings))
        index = {label: i for i, label in enumerate(label_list)}
        missing = set(label_strings) - set(index)
        if missing:
            raise ValidationError(f"labels not in label_list: {sorted(missing)}")
        return cls(
            vectors=tuple(vectors),
            labels=tuple(index[s] for s in label_strings),
            label_list=tuple(label_list),
        )

    def to_matrix(self):
        return stack_vectors(self.vectors)


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters for all nine classifier kinds, with pinned defaults.

    Only the fields of the kind being trained are consulted. ``seed`` drives
    every random choice (shuffling, bootstraps, feature subsets, embedding
    initialization), making training deterministic end to end.
    """

    seed: int = 42
    # naive bayes
    nb_alpha: float = 1.0
    # multinomial logistic regression
    logreg_l2: float = 1e-4
    logreg_epochs: int = 20
    logreg_batch: int = 64
    logreg_lr: float = 0.1
    # one-vs-rest hinge, long schedule
    svm_l2: float = 1e-5
    svm_epochs: int = 100
    svm_batch: int = 64
    svm_lr: float = 0.1
    # one-vs-rest hinge, short online schedule with step decay
    sgd_l2: float = 1e-4
    sgd_epochs: int = 5
    sgd_batch: int = 64
    sgd_lr: float = 0.1
    # nearest neighbors
    knn_k: int = 5
    # decision tree (also the forest/boosting base learner)
    tree_max_depth: int = 50
    tree_min_split: int = 2
    # random forest
    forest_trees: int = 100
    forest_bootstrap: bool = True
    forest_max_features: object = "sqrt"  # "sqrt", "all", or explicit count
    # adaboost
    ada_stages: int = 50
    # fastText-style subword model
    ft_dim: int = 64
    ft_buckets: int = 1 << 20
    ft_epochs: int = 5
    ft_lr: float = 0.1

    def __post_init__(self):
        if self.seed < 0 or self.seed >= 1 << 64:
            raise ValidationError("seed must fit in 64 unsigned bits")
        positive = (
            "nb_alpha", "logreg_l2", "logreg_epochs", "logreg_batch", "logreg_lr",
            "svm_l2", "svm_epochs", "svm_batch", "svm_lr",
            "sgd_l2", "sgd_epochs", "sgd_batch", "sgd_lr",
            "knn_k", "tree_max_depth", "tree_min_split",
            "forest_trees", "ada_stages", "ft_dim", "ft_buckets", "ft_epochs", "ft_lr",
        )
        for name in positive:
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be strictly positive")
        if self.forest_max_features != "sqrt" and self.forest_max_features != "all":
            if not (isinstance(self.forest_max_features, int)
                    and self.forest_max_features > 0):
                raise ValidationError(
                    'forest_max_features must be "sqrt", "all", or a positive count'
                )


class Model:
    """Base trained model: sorted label list, feature dim, score interface."""

    kind = None
    supports_probability = True

    def __init__(self, label_list, feature_dim):
        self.label_list = tuple(label_list)
        self.feature_dim = int(feature_dim)

    def check_vector(self, v: SparseVector):
        if v.dim != self.feature_dim:
            raise ValidationError(
                f"vector dim {v.dim} does not match model dim {self.feature_dim}"
            )

    def scores(self, v: SparseVector) -> np.ndarray:
        raise NotImplementedError

    def proba(self, v: SparseVector) -> np.ndarray:
        raise NotImplementedError

    def predict_label(self, v: SparseVector) -> str:
        self.check_vector(v)
        return self.label_list[int(np.argmax(self.scores(v)))]

    def params_payload(self) -> dict:
        raise NotImplementedError

    @classmethod
    def from_payload(cls, label_list, feature_dim, params):
        raise NotImplementedError


def softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - np.max(z)
    e = np.exp(shifted)
    return e / e.sum()


def entry_arrays(v: SparseVector):
    """Index and weight arrays of a sparse vector (empty-safe)."""
    if not v.entries:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.float64)
    idx, vals = zip(*v.entries)
    return np.asarray(idx, dtype=np.int64), np.asarray(vals, dtype=np.float64)


def require_multiclass(data: LabeledDataset, kind: str):
    if len(set(data.labels)) < 2:
        raise TrainingError(f"{kind} needs at least two distinct labels")


def require_all_labels_present(data: LabeledDataset):
    present = set(data.labels)
    missing = [
        label for i, label in enumerate(data.label_list) if i not in present
    ]
    if missing:
        raise TrainingError(f"labels without training examples: {missing}")
