"""Text-level glue: pair a vectorizer with a trained model.

The classifiers operate on SparseVectors; this layer owns the text-to-vector
step so callers (CLI, confidence filtering, ensembles) can work directly
with sentences. A ``TextClassifier`` satisfies the scorer protocol of
:func:`ilid.corpus.confidence_filter`.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import classifiers, features
from .classifiers import LabeledDataset, TrainConfig
from .errors import ValidationError

FEATURE_MODES = ("word", "char", "combined")


def fit_features(corpus, mode: str, min_df: int = 1, vocab_cap=None):
    """Fit the vectorizer for one of the three TF-IDF regimes."""
    if mode == "word":
        return features.fit_vectorizer(corpus, "word", (1, 2), min_df, vocab_cap)
    if mode == "char":
        return features.fit_vectorizer(corpus, "char", (2, 6), min_df, vocab_cap)
    if mode == "combined":
        return features.fit_combined(corpus, (1, 2), (2, 6), min_df, vocab_cap)
    raise ValidationError(f"unknown feature mode {mode!r}")


def build_dataset(corpus, vectorizer, label_list=None) -> LabeledDataset:
    vectors = [features.transform_any(vectorizer, r.text) for r in corpus]
    return LabeledDataset.from_pairs(
        vectors, [r.label for r in corpus], label_list
    )


@dataclass(frozen=True)
class TextClassifier:
    """A vectorizer/model pair exposing sentence-level prediction."""

    vectorizer: object
    model: object

    @property
    def label_list(self):
        return self.model.label_list

    @property
    def supports_probability(self) -> bool:
        return self.model.supports_probability

    def predict_text(self, text: str) -> str:
        return classifiers.predict(
            self.model, features.transform_any(self.vectorizer, text)
        )

    def predict_proba_text(self, text: str) -> dict:
        return classifiers.predict_proba(
            self.model, features.transform_any(self.vectorizer, text)
        )


def train_text_classifier(
    corpus,
    kind: str,
    feature_mode: str = "combined",
    cfg: TrainConfig = None,
    min_df: int = 1,
    vocab_cap=None,
) -> TextClassifier:
    """Fit features on the corpus, then train one classifier on them.

    ``ftstyle`` ignores ``feature_mode``: it always consumes hashed subword
    counts (its bucket count comes from ``cfg.ft_buckets``).
    """
    if cfg is None:
        cfg = TrainConfig()
    if kind == "ftstyle":
        vectorizer = features.HashedVectorizer(bucket_count=cfg.ft_buckets)
    else:
        vectorizer = fit_features(corpus, feature_mode, min_df, vocab_cap)
    dataset = build_dataset(corpus, vectorizer)
    model = classifiers.train(kind, dataset, cfg)
    return TextClassifier(vectorizer=vectorizer, model=model)


def predict_corpus(tc: TextClassifier, corpus) -> list:
    """Predicted label per record, in order."""
    return [tc.predict_text(record.text) for record in corpus]
