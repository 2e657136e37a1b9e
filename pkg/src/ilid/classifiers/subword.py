"""FastText-style classifier: averaged hashed-bucket embeddings + softmax.

Input vectors hold hashed subword bucket counts (see
:func:`ilid.features.hashed_subword_features`), not TF-IDF weights. The
hidden state is the count-weighted mean of the active buckets' embeddings.
Embedding rows are materialized lazily: row ``b`` is drawn uniform within
±1/dim from a generator seeded by (master seed, b), so a bucket first seen
at prediction time still gets the same vector on every machine — no
out-of-vocabulary failures, and only rows touched during training need to
be serialized.
"""
from __future__ import annotations

import numpy as np

from .base import LabeledDataset, Model, TrainConfig, entry_arrays, softmax


def _seeded_row(seed: int, bucket: int, dim: int) -> np.ndarray:
    rng = np.random.default_rng((seed, bucket))
    return rng.uniform(-1.0 / dim, 1.0 / dim, dim)


class FtStyleModel(Model):
    kind = "ftstyle"
    supports_probability = True

    def __init__(self, label_list, feature_dim, embed_dim, seed, embeddings, output):
        super().__init__(label_list, feature_dim)
        self.embed_dim = int(embed_dim)
        self.seed = int(seed)
        self.embeddings = {int(b): np.asarray(row, dtype=np.float64)
                           for b, row in embeddings.items()}
        self.output = np.asarray(output, dtype=np.float64)

    def _row(self, bucket: int) -> np.ndarray:
        row = self.embeddings.get(bucket)
        if row is None:
            # Derived on the fly, never cached: the model stays immutable.
            row = _seeded_row(self.seed, bucket, self.embed_dim)
        return row

    def hidden(self, v) -> np.ndarray:
        idx, vals = entry_arrays(v)
        total = vals.sum()
        if total <= 0:
            return np.zeros(self.embed_dim)
        stacked = np.vstack([self._row(int(b)) for b in idx])
        return (vals @ stacked) / total

    def scores(self, v):
        return self.output @ self.hidden(v)

    def proba(self, v):
        self.check_vector(v)
        return softmax(self.scores(v))

    def params_payload(self):
        return {
            "embed_dim": self.embed_dim,
            "seed": self.seed,
            "embeddings": {str(b): self.embeddings[b].tolist()
                           for b in sorted(self.embeddings)},
            "output": self.output.tolist(),
        }

    @classmethod
    def from_payload(cls, label_list, feature_dim, params):
        return cls(
            label_list,
            feature_dim,
            params["embed_dim"],
            params["seed"],
            {int(b): row for b, row in params["embeddings"].items()},
            params["output"],
        )


def train_ftstyle(data: LabeledDataset, cfg: TrainConfig) -> FtStyleModel:
    """Per-sentence SGD on softmax cross-entropy, linear lr decay to zero."""
    n = len(data)
    n_labels = len(data.label_list)
    dim = cfg.ft_dim
    embeddings = {}
    output = np.zeros((n_labels, dim))
    rng = np.random.default_rng(cfg.seed)
    total_steps = cfg.ft_epochs * n
    step = 0
    for _ in range(cfg.ft_epochs):
        for i in rng.permutation(n):
            lr = cfg.ft_lr * (1.0 - step / total_steps)
            step += 1
            idx, vals = entry_arrays(data.vectors[i])
            total = vals.sum()
            if total <= 0:
                continue
            rows = []
            for bucket in idx:
                bucket = int(bucket)
                if bucket not in embeddings:
                    embeddings[bucket] = _seeded_row(cfg.seed, bucket, dim)
                rows.append(embeddings[bucket])
            stacked = np.vstack(rows)
            coeffs = vals / total
            hidden = coeffs @ stacked
            delta = softmax(output @ hidden)
            delta[data.labels[i]] -= 1.0
            grad_hidden = output.T @ delta
            output -= lr * np.outer(delta, hidden)
            stacked -= lr * np.outer(coeffs, grad_hidden)
            for row_index, bucket in enumerate(idx):
                embeddings[int(bucket)] = stacked[row_index]
    return FtStyleModel(
        data.label_list, data.dim, dim, cfg.seed, embeddings, output
    )
