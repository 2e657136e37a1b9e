"""Multinomial naive Bayes over sparse feature weights."""
from __future__ import annotations

import numpy as np

from .base import LabeledDataset, Model, TrainConfig, entry_arrays, softmax


class NaiveBayesModel(Model):
    kind = "nb"
    supports_probability = True

    def __init__(self, label_list, feature_dim, class_log_prior, feature_log_prob):
        super().__init__(label_list, feature_dim)
        self.class_log_prior = np.asarray(class_log_prior, dtype=np.float64)
        self.feature_log_prob = np.asarray(feature_log_prob, dtype=np.float64)

    def scores(self, v):
        idx, vals = entry_arrays(v)
        return self.class_log_prior + self.feature_log_prob[:, idx] @ vals

    def proba(self, v):
        self.check_vector(v)
        return softmax(self.scores(v))

    def params_payload(self):
        return {
            "class_log_prior": self.class_log_prior.tolist(),
            "feature_log_prob": self.feature_log_prob.tolist(),
        }

    @classmethod
    def from_payload(cls, label_list, feature_dim, params):
        return cls(
            label_list,
            feature_dim,
            params["class_log_prior"],
            params["feature_log_prob"],
        )


def train_nb(data: LabeledDataset, cfg: TrainConfig) -> NaiveBayesModel:
    """Fit class priors and Laplace-smoothed multinomial likelihoods.

    Feature totals are sums of the (real-valued) vector weights per class;
    the smoothing constant ``cfg.nb_alpha`` is added to every total.
    """
    X = data.to_matrix()
    y = np.asarray(data.labels)
    n, dim = X.shape
    n_labels = len(data.label_list)
    class_counts = np.bincount(y, minlength=n_labels).astype(np.float64)
    totals = np.zeros((n_labels, dim))
    for c in range(n_labels):
        rows = np.flatnonzero(y == c)
        if rows.size:
            totals[c] = np.asarray(X[rows].sum(axis=0)).ravel()
    log_prior = np.log(class_counts / n)
    smoothed = totals + cfg.nb_alpha
    log_prob = np.log(smoothed / smoothed.sum(axis=1, keepdims=True))
    return NaiveBayesModel(data.label_list, dim, log_prior, log_prob)
