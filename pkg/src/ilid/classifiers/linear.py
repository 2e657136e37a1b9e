"""Linear classifiers: multinomial logistic regression and one-vs-rest hinge.

All three kinds share the parameter shape (weight matrix, per-label bias) and
the decision rule ``scores = W v + b``. They differ in the loss and schedule:

* logreg — softmax cross-entropy, L2 on weights, mini-batch SGD with
  1/(1+epoch) learning-rate decay;
* svm — one-vs-rest hinge, small L2, long 1/(1+epoch) schedule (the
  "converged" margin model);
* sgd — the same hinge but few epochs and 0.5^epoch step decay (the cheap
  online variant). svm and sgd expose decision scores only, no probabilities.
"""
from __future__ import annotations

import numpy as np

from .base import LabeledDataset, Model, TrainConfig, entry_arrays, softmax


class LinearModel(Model):
    def __init__(self, label_list, feature_dim, weights, bias):
        super().__init__(label_list, feature_dim)
        self.weights = np.asarray(weights, dtype=np.float64)
        self.bias = np.asarray(bias, dtype=np.float64)

    def scores(self, v):
        idx, vals = entry_arrays(v)
        return self.weights[:, idx] @ vals + self.bias

    def params_payload(self):
        return {"weights": self.weights.tolist(), "bias": self.bias.tolist()}

    @classmethod
    def from_payload(cls, label_list, feature_dim, params):
        return cls(label_list, feature_dim, params["weights"], params["bias"])


class LogisticRegressionModel(LinearModel):
    kind = "logreg"
    supports_probability = True

    def proba(self, v):
        self.check_vector(v)
        return softmax(self.scores(v))


class SvmModel(LinearModel):
    kind = "svm"
    supports_probability = False


class SgdModel(LinearModel):
    kind = "sgd"
    supports_probability = False


def logreg_objective(weights, bias, X, y, l2):
    """Regularized mean cross-entropy and its analytic gradient.

    Returns ``(value, grad_weights, grad_bias)`` for the objective
    ``mean CE + (l2/2)·||W||²`` — the bias is unpenalized. Used per
    mini-batch during training and directly by gradient checks.
    """
    m = X.shape[0]
    z = X @ weights.T + bias
    z -= z.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(z).sum(axis=1, keepdims=True))
    log_p = z - log_norm
    value = -log_p[np.arange(m), y].mean() + 0.5 * l2 * float((weights * weights).sum())
    delta = np.exp(log_p)
    delta[np.arange(m), y] -= 1.0
    delta /= m
    grad_w = (X.T @ delta).T + l2 * weights
    grad_b = delta.sum(axis=0)
    return value, np.asarray(grad_w), grad_b


def train_logreg(data: LabeledDataset, cfg: TrainConfig) -> LogisticRegressionModel:
    X = data.to_matrix()
    y = np.asarray(data.labels)
    n, dim = X.shape
    n_labels = len(data.label_list)
    weights = np.zeros((n_labels, dim))
    bias = np.zeros(n_labels)
    rng = np.random.default_rng(cfg.seed)
    for epoch in range(cfg.logreg_epochs):
        lr = cfg.logreg_lr / (1 + epoch)
        perm = rng.permutation(n)
        for start in range(0, n, cfg.logreg_batch):
            batch = perm[start : start + cfg.logreg_batch]
            _, grad_w, grad_b = logreg_objective(
                weights, bias, X[batch], y[batch], cfg.logreg_l2
            )
            weights -= lr * grad_w
            bias -= lr * grad_b
    return LogisticRegressionModel(data.label_list, dim, weights, bias)


def _train_hinge(data, seed, l2, epochs, batch_size, lr0, decay):
    """Mini-batch subgradient descent on one-vs-rest L2-regularized hinge."""
    X = data.to_matrix()
    y = np.asarray(data.labels)
    n, dim = X.shape
    n_labels = len(data.label_list)
    signs = np.full((n, n_labels), -1.0)
    signs[np.arange(n), y] = 1.0
    weights = np.zeros((n_labels, dim))
    bias = np.zeros(n_labels)
    rng = np.random.default_rng(seed)
    for epoch in range(epochs):
        lr = lr0 / (1 + epoch) if decay == "inverse" else lr0 * 0.5**epoch
        perm = rng.permutation(n)
        for start in range(0, n, batch_size):
            batch = perm[start : start + batch_size]
            Xb = X[batch]
            Yb = signs[batch]
            margins = (Xb @ weights.T + bias) * Yb
            active = np.where(margins < 1.0, Yb, 0.0)
            m = len(batch)
            weights *= 1.0 - lr * l2
            weights += (lr / m) * np.asarray(Xb.T @ active).T
            bias += (lr / m) * active.sum(axis=0)
    return weights, bias


def train_svm(data: LabeledDataset, cfg: TrainConfig) -> SvmModel:
    weights, bias = _train_hinge(
        data, cfg.seed, cfg.svm_l2, cfg.svm_epochs, cfg.svm_batch,
        cfg.svm_lr, "inverse",
    )
    return SvmModel(data.label_list, data.dim, weights, bias)


def train_sgd(data: LabeledDataset, cfg: TrainConfig) -> SgdModel:
    weights, bias = _train_hinge(
        data, cfg.seed, cfg.sgd_l2, cfg.sgd_epochs, cfg.sgd_batch,
        cfg.sgd_lr, "step",
    )
    return SgdModel(data.label_list, data.dim, weights, bias)
