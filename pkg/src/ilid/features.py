"""TF-IDF feature extraction and hashed subword features.

Three vectorizer regimes over cleaned sentences:

* word mode — uni/bi-grams over the token sequence;
* char mode — character 2–6-grams over the raw sentence string, spaces
  included;
* combined — word and char vectors L2-normalized independently, then
  concatenated (char indices offset by the word dimension) and renormalized.

Weights are raw term counts times a smoothed inverse document frequency,
``idf = ln((1 + N) / (1 + df)) + 1``, and every non-zero output vector is
L2-normalized. Vocabulary indices follow lexicographic n-gram order, so
fitting is deterministic across runs and platforms.

Hashed subword features (for the fastText-style classifier) map word tokens
and boundary-marked character n-grams to power-of-two bucket indices via
64-bit FNV-1a, with no out-of-vocabulary failures.
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from . import textproc
from .errors import TrainingError, ValidationError

VECTORIZER_FORMAT_VERSION = 1

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SparseVector:
    """Sparse real vector: entries sorted strictly by index, no stored zeros."""

    dim: int
    entries: tuple  # of (index, weight)

    def __post_init__(self):
        object.__setattr__(
            self, "entries", tuple((int(i), float(w)) for i, w in self.entries)
        )
        prev = -1
        for index, weight in self.entries:
            if not 0 <= index < self.dim:
                raise ValidationError(f"index {index} out of range for dim {self.dim}")
            if index <= prev:
                raise ValidationError("entry indices must be strictly increasing")
            if weight == 0.0:
                raise ValidationError("zero weights must not be stored")
            prev = index

    def norm(self) -> float:
        return math.sqrt(sum(w * w for _, w in self.entries))

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.dim)
        for index, weight in self.entries:
            dense[index] = weight
        return dense


def stack_vectors(vectors) -> sp.csr_matrix:
    """CSR matrix with one SparseVector per row (vectors must share dim)."""
    vectors = list(vectors)
    if not vectors:
        raise ValidationError("cannot stack zero vectors")
    dim = vectors[0].dim
    if any(v.dim != dim for v in vectors):
        raise ValidationError("stacked vectors must share a dimension")
    indptr = [0]
    indices = []
    data = []
    for vec in vectors:
        for index, weight in vec.entries:
            indices.append(index)
            data.append(weight)
        indptr.append(len(indices))
    return sp.csr_matrix(
        (np.asarray(data, dtype=np.float64),
         np.asarray(indices, dtype=np.int64),
         np.asarray(indptr, dtype=np.int64)),
        shape=(len(vectors), dim),
    )


def _word_ngrams(text, lo, hi):
    tokens = textproc.tokenize_words(text)
    grams = []
    for n in range(lo, hi + 1):
        grams.extend(
            " ".join(tokens[i : i + n]) for i in range(len(tokens) - n + 1)
        )
    return grams


def _char_ngrams(text, lo, hi):
    grams = []
    for n in range(lo, hi + 1):
        grams.extend(text[i : i + n] for i in range(len(text) - n + 1))
    return grams


def _ngrams(mode, text, lo, hi):
    if mode == "word":
        return _word_ngrams(text, lo, hi)
    return _char_ngrams(text, lo, hi)


@dataclass(frozen=True)
class Vectorizer:
    mode: str
    ngram_range: tuple
    vocabulary: dict  # n-gram string -> contiguous index
    idf: tuple  # per-index weights
    min_df: int
    doc_count_fitted: int

    @property
    def dim(self) -> int:
        return len(self.vocabulary)


@dataclass(frozen=True)
class CombinedVectorizer:
    word_part: Vectorizer
    char_part: Vectorizer

    @property
    def dim(self) -> int:
        return self.word_part.dim + self.char_part.dim


@dataclass(frozen=True)
class HashedVectorizer:
    """Stateless vectorizer emitting hashed subword bucket counts.

    Nothing is fitted: the dimension is the bucket count and any text maps
    to counts via :func:`hashed_subword_features`, so unseen words never
    fail. This is the input representation of the fastText-style classifier.
    """

    bucket_count: int = 1 << 20
    word_ngrams: tuple = (1, 1)
    char_ngrams: tuple = (3, 6)

    def __post_init__(self):
        if self.bucket_count < 2 or self.bucket_count & (self.bucket_count - 1):
            raise ValidationError("bucket_count must be a power of two >= 2")
        object.__setattr__(self, "word_ngrams", tuple(self.word_ngrams))
        object.__setattr__(self, "char_ngrams", tuple(self.char_ngrams))

    @property
    def dim(self) -> int:
        return self.bucket_count


def transform_hashed(hv: HashedVectorizer, text: str) -> SparseVector:
    counts = Counter(
        hashed_subword_features(
            text, hv.bucket_count, hv.word_ngrams, hv.char_ngrams
        )
    )
    entries = tuple((i, float(counts[i])) for i in sorted(counts))
    return SparseVector(dim=hv.bucket_count, entries=entries)


def fit_vectorizer(corpus, mode, ngram_range, min_df=1, vocab_cap=None) -> Vectorizer:
    """Learn the n-gram vocabulary and IDF weights from a corpus.

    Vocabulary holds every n-gram with document frequency >= ``min_df``,
    indexed lexicographically; ``vocab_cap`` optionally keeps only the top-K
    by document frequency (ties resolved lexicographically) before indexing.
    """
    if mode not in ("word", "char"):
        raise ValidationError(f"unknown vectorizer mode {mode!r}")
    lo, hi = ngram_range
    if not 1 <= lo <= hi:
        raise ValidationError(f"bad ngram_range {ngram_range!r}: need 1 <= lo <= hi")
    if min_df < 1:
        raise ValidationError("min_df must be >= 1")
    records = list(corpus)
    if not records:
        raise TrainingError("cannot fit a vectorizer on an empty corpus")
    df = Counter()
    for record in records:
        df.update(set(_ngrams(mode, record.text, lo, hi)))
    kept = [gram for gram, count in df.items() if count >= min_df]
    if vocab_cap is not None and len(kept) > vocab_cap:
        kept.sort(key=lambda gram: (-df[gram], gram))
        kept = kept[:vocab_cap]
    kept.sort()
    vocabulary = {gram: i for i, gram in enumerate(kept)}
    n_docs = len(records)
    idf = tuple(
        math.log((1 + n_docs) / (1 + df[gram])) + 1.0 for gram in kept
    )
    return Vectorizer(
        mode=mode,
        ngram_range=(lo, hi),
        vocabulary=vocabulary,
        idf=idf,
        min_df=min_df,
        doc_count_fitted=n_docs,
    )


def transform(vz: Vectorizer, text: str) -> SparseVector:
    """TF-IDF vector of one sentence, L2-normalized when non-zero."""
    lo, hi = vz.ngram_range
    counts = Counter(_ngrams(vz.mode, text, lo, hi))
    weights = {}
    for gram, count in counts.items():
        index = vz.vocabulary.get(gram)
        if index is not None:
            weights[index] = count * vz.idf[index]
    norm = math.sqrt(sum(w * w for w in weights.values()))
    if norm > 0:
        entries = tuple((i, weights[i] / norm) for i in sorted(weights))
    else:
        entries = ()
    return SparseVector(dim=vz.dim, entries=entries)


def transform_combined(cv: CombinedVectorizer, text: str) -> SparseVector:
    """Concatenate per-part unit vectors and renormalize the result."""
    word_vec = transform(cv.word_part, text)
    char_vec = transform(cv.char_part, text)
    offset = cv.word_part.dim
    entries = list(word_vec.entries) + [
        (index + offset, weight) for index, weight in char_vec.entries
    ]
    norm = math.sqrt(sum(w * w for _, w in entries))
    if norm > 0:
        entries = [(i, w / norm) for i, w in entries]
    return SparseVector(dim=cv.dim, entries=tuple(entries))


def fit_combined(corpus, word_range=(1, 2), char_range=(2, 6), min_df=1,
                 vocab_cap=None) -> CombinedVectorizer:
    return CombinedVectorizer(
        word_part=fit_vectorizer(corpus, "word", word_range, min_df, vocab_cap),
        char_part=fit_vectorizer(corpus, "char", char_range, min_df, vocab_cap),
    )


def transform_any(vectorizer, text: str) -> SparseVector:
    """Dispatch on vectorizer type: single, combined, or hashed."""
    if isinstance(vectorizer, CombinedVectorizer):
        return transform_combined(vectorizer, text)
    if isinstance(vectorizer, HashedVectorizer):
        return transform_hashed(vectorizer, text)
    return transform(vectorizer, text)


# ---------------------------------------------------------------------------
# hashed subword features

def fnv1a64(text: str) -> int:
    """64-bit FNV-1a over the UTF-8 bytes; fixed and platform-independent."""
    value = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        value = ((value ^ byte) * _FNV_PRIME) & _MASK64
    return value


def hashed_subword_features(text, bucket_count, word_ngrams=(1, 1),
                            char_ngrams=(3, 6)) -> list:
    """Bucket indices (with multiplicity) for word and subword features.

    One index per word n-gram over the token sequence, plus one per
    character n-gram of each token wrapped in boundary markers "<" and ">".
    ``bucket_count`` must be a power of two >= 2; indices are the FNV-1a
    hash reduced modulo the bucket count.
    """
    if bucket_count < 2 or bucket_count & (bucket_count - 1):
        raise ValidationError("bucket_count must be a power of two >= 2")
    mask = bucket_count - 1
    tokens = textproc.tokenize_words(text)
    buckets = []
    w_lo, w_hi = word_ngrams
    for n in range(w_lo, w_hi + 1):
        for i in range(len(tokens) - n + 1):
            buckets.append(fnv1a64(" ".join(tokens[i : i + n])) & mask)
    c_lo, c_hi = char_ngrams
    for token in tokens:
        marked = f"<{token}>"
        for n in range(c_lo, c_hi + 1):
            for i in range(len(marked) - n + 1):
                buckets.append(fnv1a64(marked[i : i + n]) & mask)
    return buckets


# ---------------------------------------------------------------------------
# serialization

def _vectorizer_payload(vz: Vectorizer) -> dict:
    return {
        "format_version": VECTORIZER_FORMAT_VERSION,
        "mode": vz.mode,
        "ngram_range": list(vz.ngram_range),
        "vocabulary": vz.vocabulary,
        "idf": list(vz.idf),
        "min_df": vz.min_df,
        "doc_count_fitted": vz.doc_count_fitted,
    }


def _vectorizer_from_payload(payload: dict) -> Vectorizer:
    vocabulary = dict(payload["vocabulary"])
    idf = tuple(float(x) for x in payload["idf"])
    if len(idf) != len(vocabulary):
        raise ValidationError("idf length does not match vocabulary size")
    return Vectorizer(
        mode=payload["mode"],
        ngram_range=tuple(payload["ngram_range"]),
        vocabulary=vocabulary,
        idf=idf,
        min_df=int(payload["min_df"]),
        doc_count_fitted=int(payload["doc_count_fitted"]),
    )


def save_vectorizer(vectorizer, path) -> None:
    """Write a vectorizer (single, combined, or hashed) as versioned JSON."""
    if isinstance(vectorizer, CombinedVectorizer):
        payload = {
            "format_version": VECTORIZER_FORMAT_VERSION,
            "mode": "combined",
            "word_part": _vectorizer_payload(vectorizer.word_part),
            "char_part": _vectorizer_payload(vectorizer.char_part),
        }
    elif isinstance(vectorizer, HashedVectorizer):
        payload = {
            "format_version": VECTORIZER_FORMAT_VERSION,
            "mode": "hashed",
            "bucket_count": vectorizer.bucket_count,
            "word_ngrams": list(vectorizer.word_ngrams),
            "char_ngrams": list(vectorizer.char_ngrams),
        }
    else:
        payload = _vectorizer_payload(vectorizer)
    text = json.dumps(payload, ensure_ascii=False, sort_keys=True)
    Path(path).write_bytes(text.encode("utf-8"))


def load_vectorizer(path):
    try:
        payload = json.loads(Path(path).read_bytes().decode("utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ValidationError(f"unreadable vectorizer file {str(path)!r}: {exc}") from exc
    if not isinstance(payload, dict) or "mode" not in payload:
        raise ValidationError(f"malformed vectorizer file {str(path)!r}")
    if payload.get("format_version") != VECTORIZER_FORMAT_VERSION:
        raise ValidationError(
            f"unsupported vectorizer format_version {payload.get('format_version')!r}"
        )
    if payload["mode"] == "combined":
        return CombinedVectorizer(
            word_part=_vectorizer_from_payload(payload["word_part"]),
            char_part=_vectorizer_from_payload(payload["char_part"]),
        )
    if payload["mode"] == "hashed":
        return HashedVectorizer(
            bucket_count=int(payload["bucket_count"]),
            word_ngrams=tuple(payload["word_ngrams"]),
            char_ngrams=tuple(payload["char_ngrams"]),
        )
    return _vectorizer_from_payload(payload)
