"""Nine trainable sentence classifiers under one train/predict contract.

Kinds: nb, logreg, svm, sgd, knn, dtree, rforest, adaboost, ftstyle.
``svm`` and ``sgd`` expose decision scores only; every other kind also
yields a probability distribution. All argmax and plurality ties resolve to
the lexicographically smallest label.
"""
from __future__ import annotations

import json
from pathlib import Path

from ..errors import CapabilityError, TrainingError, ValidationError
from .base import (
    MODEL_FORMAT_VERSION,
    LabeledDataset,
    Model,
    TrainConfig,
    require_all_labels_present,
    require_multiclass,
)
from .forests import AdaBoostModel, RandomForestModel, train_adaboost, train_rforest
from .linear import (
    LogisticRegressionModel,
    SgdModel,
    SvmModel,
    logreg_objective,
    train_logreg,
    train_sgd,
    train_svm,
)
from .naive_bayes import NaiveBayesModel, train_nb
from .neighbors import KnnModel, train_knn
from .subword import FtStyleModel, train_ftstyle
from .tree import DecisionTreeModel, train_dtree

KINDS = (
    "nb", "logreg", "svm", "sgd", "knn", "dtree", "rforest", "adaboost", "ftstyle",
)

_TRAINERS = {
    "nb": train_nb,
    "logreg": train_logreg,
    "svm": train_svm,
    "sgd": train_sgd,
    "knn": train_knn,
    "dtree": train_dtree,
    "rforest": train_rforest,
    "adaboost": train_adaboost,
    "ftstyle": train_ftstyle,
}

_MODEL_CLASSES = {
    cls.kind: cls
    for cls in (
        NaiveBayesModel, LogisticRegressionModel, SvmModel, SgdModel,
        KnnModel, DecisionTreeModel, RandomForestModel, AdaBoostModel,
        FtStyleModel,
    )
}

#: Kinds trained with a one-vs-rest / multinomial linear decision function.
LINEAR_KINDS = ("logreg", "svm", "sgd")

#: Kinds requiring at least two distinct labels in the training data.
_DISCRIMINATIVE = ("logreg", "svm", "sgd", "adaboost")


def train(kind: str, data: LabeledDataset, cfg: TrainConfig = None) -> Model:
    """Train one classifier; deterministic for fixed data and seed."""
    if kind not in KINDS:
        raise ValidationError(f"unknown classifier kind {kind!r}")
    if cfg is None:
        cfg = TrainConfig()
    if len(data) == 0:
        raise TrainingError("cannot train on an empty dataset")
    require_all_labels_present(data)
    if kind in _DISCRIMINATIVE:
        require_multiclass(data, kind)
    return _TRAINERS[kind](data, cfg)


def predict(model: Model, v) -> str:
    """Highest-scoring label; ties go to the lexicographically smallest."""
    return model.predict_label(v)


def predict_proba(model: Model, v) -> dict:
    """Label-to-probability map; requires a probability-capable model."""
    if not model.supports_probability:
        raise CapabilityError(
            f"{model.kind} is a non-probabilistic classifier; "
            "use decision_scores or hard voting"
        )
    model.check_vector(v)
    proba = model.proba(v)
    return {label: float(p) for label, p in zip(model.label_list, proba)}


def decision_scores(model: Model, v) -> dict:
    """Raw linear scores (weight-row dot v plus bias) per label."""
    if model.kind not in LINEAR_KINDS:
        raise CapabilityError(f"{model.kind} has no linear decision function")
    model.check_vector(v)
    return {label: float(s) for label, s in zip(model.label_list, model.scores(v))}


def save_model(model: Model, path) -> None:
    """Write the versioned JSON envelope; byte-stable for identical models."""
    payload = {
        "format_version": MODEL_FORMAT_VERSION,
        "kind": model.kind,
        "label_list": list(model.label_list),
        "feature_dim": model.feature_dim,
        "params": model.params_payload(),
    }
    text = json.dumps(payload, ensure_ascii=False, sort_keys=True)
    Path(path).write_bytes(text.encode("utf-8"))


def load_model(path) -> Model:
    try:
        payload = json.loads(Path(path).read_bytes().decode("utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ValidationError(f"unreadable model file {str(path)!r}: {exc}") from exc
    if not isinstance(payload, dict) or "kind" not in payload:
        raise ValidationError(f"malformed model file {str(path)!r}")
    if payload.get("format_version") != MODEL_FORMAT_VERSION:
        raise ValidationError(
            f"unsupported model format_version {payload.get('format_version')!r}"
        )
    kind = payload["kind"]
    if kind not in _MODEL_CLASSES:
        raise ValidationError(f"unknown model kind {kind!r}")
    label_list = tuple(payload["label_list"])
    if list(label_list) != sorted(set(label_list)):
        raise ValidationError("model label_list must be sorted and duplicate-free")
    return _MODEL_CLASSES[kind].from_payload(
        label_list, int(payload["feature_dim"]), payload["params"]
    )
