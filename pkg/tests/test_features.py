"""TF-IDF vectorizers and hashed subword features, checked against oracles.

The TF-IDF path is compared to scikit-learn's TfidfVectorizer driven by the
same analyzer (test-only dependency); the hashing path is compared to the
published FNV-1a reference values and an inline re-derivation.
"""
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sklearn.feature_extraction.text import TfidfVectorizer

from ilid.corpus import Corpus, SentenceRecord
from ilid.errors import TrainingError, ValidationError
from ilid.features import (
    CombinedVectorizer,
    HashedVectorizer,
    SparseVector,
    fit_combined,
    fit_vectorizer,
    fnv1a64,
    hashed_subword_features,
    load_vectorizer,
    save_vectorizer,
    stack_vectors,
    transform,
    transform_any,
    transform_combined,
    transform_hashed,
)
from ilid.features import _char_ngrams, _word_ngrams

DOCS = [
    "the cat sat on the mat",
    "नमस्ते दुनिया यह वाक्य है",
    "the dog sat on the log",
    "ਇਹ ਪੰਜਾਬੀ ਵਾਕ ਹੈ",
    "cats and dogs and cats",
    "यह दूसरा वाक्य है",
    "short one",
    "a b a b a b",
]


def corpus_of(texts):
    return Corpus(
        records=tuple(SentenceRecord(label="eng", text=t) for t in texts)
    )


# ------------------------------------------------------------ sparse vectors

def test_sparse_vector_validation():
    SparseVector(dim=4, entries=((0, 1.0), (3, -2.0)))
    with pytest.raises(ValidationError):
        SparseVector(dim=4, entries=((3, 1.0), (0, 1.0)))  # not increasing
    with pytest.raises(ValidationError):
        SparseVector(dim=4, entries=((1, 1.0), (1, 2.0)))  # repeated index
    with pytest.raises(ValidationError):
        SparseVector(dim=4, entries=((4, 1.0),))  # out of range
    with pytest.raises(ValidationError):
        SparseVector(dim=4, entries=((2, 0.0),))  # stored zero


def test_sparse_vector_norm_and_dense():
    vec = SparseVector(dim=5, entries=((1, 3.0), (4, 4.0)))
    assert vec.norm() == 5.0
    assert np.array_equal(vec.to_dense(), np.array([0, 3, 0, 0, 4.0]))


def test_stack_vectors_matches_dense():
    vecs = [
        SparseVector(dim=3, entries=((0, 1.0),)),
        SparseVector(dim=3, entries=()),
        SparseVector(dim=3, entries=((1, 2.0), (2, 3.0))),
    ]
    mat = stack_vectors(vecs)
    assert mat.shape == (3, 3)
    assert np.array_equal(mat.toarray(), np.vstack([v.to_dense() for v in vecs]))


def test_stack_vectors_requires_shared_dim():
    with pytest.raises(ValidationError):
        stack_vectors([SparseVector(2, ()), SparseVector(3, ())])
    with pytest.raises(ValidationError):
        stack_vectors([])


# ------------------------------------------------------------- tf-idf oracle

def sklearn_matrix(texts, analyzer):
    ref = TfidfVectorizer(
        analyzer=analyzer, norm="l2", smooth_idf=True, sublinear_tf=False
    )
    return ref, ref.fit_transform(texts).toarray()


@pytest.mark.parametrize(
    "mode,ngram_range",
    [("word", (1, 1)), ("word", (1, 2)), ("char", (2, 3)), ("char", (2, 6))],
)
def test_tfidf_matches_sklearn(mode, ngram_range):
    lo, hi = ngram_range
    if mode == "word":
        analyzer = lambda text: _word_ngrams(text, lo, hi)
    else:
        analyzer = lambda text: _char_ngrams(text, lo, hi)
    ref, expected = sklearn_matrix(DOCS, analyzer)

    vz = fit_vectorizer(corpus_of(DOCS), mode=mode, ngram_range=ngram_range)
    assert list(ref.get_feature_names_out()) == sorted(vz.vocabulary)
    assert np.allclose(ref.idf_, np.asarray(vz.idf), atol=1e-12)
    ours = np.vstack([transform(vz, t).to_dense() for t in DOCS])
    assert np.allclose(ours, expected, atol=1e-12)


def test_idf_formula_by_hand():
    # "ab" appears in 2 of 3 docs, "cd" in 1.
    vz = fit_vectorizer(corpus_of(["ab", "ab cd", "ef"]), "word", (1, 1))
    assert vz.doc_count_fitted == 3
    assert vz.idf[vz.vocabulary["ab"]] == pytest.approx(math.log(4 / 3) + 1)
    assert vz.idf[vz.vocabulary["cd"]] == pytest.approx(math.log(4 / 2) + 1)


def test_vocabulary_indices_are_lexicographic():
    vz = fit_vectorizer(corpus_of(["b c a"]), "word", (1, 1))
    assert vz.vocabulary == {"a": 0, "b": 1, "c": 2}


def test_char_grams_include_spaces():
    vz = fit_vectorizer(corpus_of(["a b"]), "char", (2, 2))
    assert set(vz.vocabulary) == {"a ", " b"}


def test_min_df_prunes_rare_grams():
    vz = fit_vectorizer(corpus_of(["aa bb", "aa cc"]), "word", (1, 1), min_df=2)
    assert set(vz.vocabulary) == {"aa"}


def test_vocab_cap_keeps_top_df_with_lexicographic_ties():
    texts = ["aa ab", "ab aa", "ac ad"]
    vz = fit_vectorizer(corpus_of(texts), "word", (1, 1), vocab_cap=3)
    assert set(vz.vocabulary) == {"aa", "ab", "ac"}  # ac beats ad on the tie
    assert vz.vocabulary == {"aa": 0, "ab": 1, "ac": 2}


def test_fit_vectorizer_argument_validation():
    with pytest.raises(TrainingError):
        fit_vectorizer(corpus_of([]), "word", (1, 1))
    with pytest.raises(ValidationError):
        fit_vectorizer(corpus_of(["x"]), "byte", (1, 1))
    with pytest.raises(ValidationError):
        fit_vectorizer(corpus_of(["x"]), "word", (2, 1))
    with pytest.raises(ValidationError):
        fit_vectorizer(corpus_of(["x"]), "word", (1, 1), min_df=0)


def test_transform_of_unseen_text_is_empty():
    vz = fit_vectorizer(corpus_of(["aa bb"]), "word", (1, 1))
    assert transform(vz, "zz yy").entries == ()


@given(st.text(alphabet="abc ", max_size=30))
def test_transform_norm_is_one_or_zero(text):
    vz = fit_vectorizer(corpus_of(["a b c ab bc abc"]), "char", (1, 3))
    vec = transform(vz, text)
    if vec.entries:
        assert vec.norm() == pytest.approx(1.0)


# ----------------------------------------------------------------- combined

def test_combined_concatenates_and_renormalizes():
    cv = fit_combined(corpus_of(DOCS), word_range=(1, 2), char_range=(2, 3))
    text = DOCS[0]
    word_vec = transform(cv.word_part, text).to_dense()
    char_vec = transform(cv.char_part, text).to_dense()
    expected = np.concatenate([word_vec, char_vec])
    expected /= np.linalg.norm(expected)
    got = transform_combined(cv, text).to_dense()
    assert got.shape == (cv.dim,)
    assert np.allclose(got, expected, atol=1e-12)
    # Both parts were unit vectors, so the concatenation norm was sqrt(2).
    assert np.linalg.norm(np.concatenate([word_vec, char_vec])) == pytest.approx(
        math.sqrt(2)
    )


def test_combined_with_one_empty_part():
    cv = fit_combined(corpus_of(["aa bb"]), word_range=(1, 1), char_range=(2, 2))
    # Unseen words but seen character pairs: word part contributes nothing,
    # so the result equals the char part alone (still unit norm).
    vec = transform_combined(cv, "ba ab")
    assert vec.norm() == pytest.approx(1.0)
    assert all(index >= cv.word_part.dim for index, _ in vec.entries)


def test_transform_any_dispatch():
    texts = ["aa bb", "bb cc"]
    single = fit_vectorizer(corpus_of(texts), "word", (1, 1))
    combined = fit_combined(corpus_of(texts), (1, 1), (2, 2))
    hashed = HashedVectorizer(bucket_count=1 << 10)
    for vz in (single, combined, hashed):
        vec = transform_any(vz, "aa bb")
        assert vec.dim == vz.dim


# ------------------------------------------------------------------ hashing

def test_fnv1a64_reference_vectors():
    # Published FNV-1a 64-bit test values.
    assert fnv1a64("") == 0xCBF29CE484222325
    assert fnv1a64("a") == 0xAF63DC4C8601EC8C
    assert fnv1a64("foobar") == 0x85944171F73967E8


def test_fnv1a64_matches_inline_rederivation():
    def reference(text):
        value = 0xCBF29CE484222325
        for byte in text.encode("utf-8"):
            value = ((value ^ byte) * 0x100000001B3) % 2**64
        return value

    for text in ["", "a", "ab", "नमस्ते", "<ab>", "the cat"]:
        assert fnv1a64(text) == reference(text)


def test_hashed_subword_features_by_hand():
    buckets = hashed_subword_features(
        "ab cd", bucket_count=1 << 16, word_ngrams=(1, 1), char_ngrams=(3, 4)
    )
    mask = (1 << 16) - 1
    expected = [
        fnv1a64(g) & mask
        for g in ["ab", "cd", "<ab", "ab>", "<ab>", "<cd", "cd>", "<cd>"]
    ]
    assert Counter(buckets) == Counter(expected)


def test_hashed_bucket_count_must_be_power_of_two():
    with pytest.raises(ValidationError):
        hashed_subword_features("x", bucket_count=1000)
    with pytest.raises(ValidationError):
        HashedVectorizer(bucket_count=3)


def test_transform_hashed_counts():
    hv = HashedVectorizer(bucket_count=1 << 12, word_ngrams=(1, 1), char_ngrams=(3, 4))
    vec = transform_hashed(hv, "ab ab")
    total = sum(w for _, w in vec.entries)
    n_features = len(
        hashed_subword_features("ab ab", 1 << 12, (1, 1), (3, 4))
    )
    assert total == n_features
    assert all(w == int(w) and w > 0 for _, w in vec.entries)


@given(st.text(alphabet="abcd ", max_size=40))
def test_hashed_features_never_fail_on_unseen_text(text):
    hv = HashedVectorizer(bucket_count=1 << 8)
    vec = transform_hashed(hv, text)
    assert vec.dim == 1 << 8
    assert all(0 <= i < 1 << 8 for i, _ in vec.entries)


# ------------------------------------------------------------- serialization

@pytest.mark.parametrize("flavor", ["single", "combined", "hashed"])
def test_vectorizer_round_trip(flavor, tmp_path):
    texts = ["aa bb cc", "bb cc dd", "नमस्ते"]
    if flavor == "single":
        vz = fit_vectorizer(corpus_of(texts), "char", (2, 3))
    elif flavor == "combined":
        vz = fit_combined(corpus_of(texts), (1, 2), (2, 3))
    else:
        vz = HashedVectorizer(bucket_count=1 << 10, char_ngrams=(3, 5))
    path = tmp_path / "vec.json"
    save_vectorizer(vz, path)
    loaded = load_vectorizer(path)
    assert loaded == vz
    for text in texts + ["unseen words here"]:
        assert transform_any(loaded, text) == transform_any(vz, text)


def test_vectorizer_save_is_byte_deterministic(tmp_path):
    vz = fit_vectorizer(corpus_of(["aa bb", "bb cc"]), "word", (1, 1))
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    save_vectorizer(vz, p1)
    save_vectorizer(vz, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_load_vectorizer_rejects_bad_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("not json at all")
    with pytest.raises(ValidationError):
        load_vectorizer(bad)
    bad.write_text('{"mode": "word", "format_version": 99}')
    with pytest.raises(ValidationError):
        load_vectorizer(bad)
    bad.write_text('{"no_mode": true}')
    with pytest.raises(ValidationError):
        load_vectorizer(bad)
