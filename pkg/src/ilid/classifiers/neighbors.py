"""k-nearest-neighbor classification by cosine similarity, brute force."""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .base import LabeledDataset, Model, TrainConfig, entry_arrays


class KnnModel(Model):
    kind = "knn"
    supports_probability = True

    def __init__(self, label_list, feature_dim, matrix, labels, k):
        super().__init__(label_list, feature_dim)
        self.matrix = matrix.tocsr()
        self.labels = np.asarray(labels, dtype=np.int64)
        self.k = int(k)
        norms = np.sqrt(np.asarray(self.matrix.multiply(self.matrix).sum(axis=1)).ravel())
        self._norms = norms

    def _neighbor_votes(self, v):
        idx, vals = entry_arrays(v)
        n = self.matrix.shape[0]
        query_norm = float(np.sqrt((vals * vals).sum()))
        if idx.size and query_norm > 0:
            column = sp.csc_matrix(
                (vals, (idx, np.zeros(idx.size, dtype=np.int64))),
                shape=(self.feature_dim, 1),
            )
            dots = np.asarray((self.matrix @ column).todense()).ravel()
            with np.errstate(divide="ignore", invalid="ignore"):
                sims = np.where(
                    self._norms > 0, dots / (self._norms * query_norm), 0.0
                )
        else:
            sims = np.zeros(n)
        # Sort by similarity descending, then training index ascending, so
        # ties at the k-th rank go to the lower index.
        order = np.lexsort((np.arange(n), -sims))
        top = order[: min(self.k, n)]
        return np.bincount(self.labels[top], minlength=len(self.label_list)).astype(
            np.float64
        )

    def scores(self, v):
        return self._neighbor_votes(v)

    def proba(self, v):
        self.check_vector(v)
        votes = self._neighbor_votes(v)
        return votes / votes.sum()

    def params_payload(self):
        csr = self.matrix
        return {
            "k": self.k,
            "labels": self.labels.tolist(),
            "shape": list(csr.shape),
            "indptr": csr.indptr.tolist(),
            "indices": csr.indices.tolist(),
            "data": csr.data.tolist(),
        }

    @classmethod
    def from_payload(cls, label_list, feature_dim, params):
        matrix = sp.csr_matrix(
            (
                np.asarray(params["data"], dtype=np.float64),
                np.asarray(params["indices"], dtype=np.int64),
                np.asarray(params["indptr"], dtype=np.int64),
            ),
            shape=tuple(params["shape"]),
        )
        return cls(label_list, feature_dim, matrix, params["labels"], params["k"])


def train_knn(data: LabeledDataset, cfg: TrainConfig) -> KnnModel:
    """Store the training set; ``k`` is clamped to the corpus size at query."""
    return KnnModel(
        data.label_list, data.dim, data.to_matrix(), data.labels, cfg.knn_k
    )
