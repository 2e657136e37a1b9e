"""Acceptance suite: ten end-to-end criteria with pinned tolerances.

Each criterion records one PASS/FAIL line (printed in the terminal summary
via the conftest hook) and then asserts, so a red run still reports every
criterion it reached. Criterion 10 needs an externally supplied dataset and
is skipped — never failed — when ILID_DATA_DIR is unset.
"""
import itertools
import math
import os
import time
from pathlib import Path

import numpy as np
import pytest

from ilid.classifiers import KINDS, load_model, predict, save_model, train
from ilid.classifiers.base import LabeledDataset, TrainConfig
from ilid.corpus import (
    Corpus,
    SentenceRecord,
    SplitSpec,
    derive_stats_row,
    load_corpus,
    save_corpus,
    split_corpus,
)
from ilid.ensemble import EnsembleSpec, ensemble_predict, vote_hard, vote_soft
from ilid.features import (
    SparseVector,
    fit_combined,
    fit_vectorizer,
    load_vectorizer,
    save_vectorizer,
    transform,
    transform_any,
)
from ilid.harvest import ThrottleConfig, throttle_delay
from ilid.metrics import evaluate
from ilid.pipeline import build_dataset
from ilid.synth import gen_synthetic

#: (criterion number, status, detail) rows consumed by pytest_terminal_summary.
RESULTS = []


def record(number, ok, detail):
    RESULTS.append((number, "PASS" if ok else "FAIL", detail))
    assert ok, f"criterion {number}: {detail}"


def record_skip(number, reason):
    RESULTS.append((number, "SKIP", reason))


# ---------------------------------------------------------------------------
# 1. corpus-statistic identities on published count rows

# label: (sentences, words, chars, unique_words) -> expected
# (avg_sent_len, avg_word_len, ttr_words), each to be matched within ±0.001.
REFERENCE_STAT_ROWS = {
    "mai": ((10000, 65884, 288223, 6743), (28.822, 3.526, 0.102)),
    "eng": ((10000, 225036, 1052283, 22709), (105.228, 3.721, 0.101)),
    "kan": ((10000, 122400, 861095, 34644), (86.109, 6.117, 0.283)),
    "snd_Arab": ((10000, 113249, 479446, 7409), (47.945, 3.322, 0.065)),
    "sat": ((10000, 78554, 360814, 4067), (36.081, 3.72, 0.052)),
}


def test_criterion_01_stat_identities():
    start = time.perf_counter()
    worst = 0.0
    for label, (counts, expected) in REFERENCE_STAT_ROWS.items():
        sentences, words, chars, unique_words = counts
        row = derive_stats_row(label, sentences, words, chars, unique_words)
        got = (row.avg_sent_len, row.avg_word_len, row.ttr_words)
        worst = max(worst, *(abs(g - e) for g, e in zip(got, expected)))
    elapsed = time.perf_counter() - start
    ok = worst <= 0.001 and elapsed < 1.0
    record(
        1,
        ok,
        f"statistic identities: worst deviation {worst:.6f} <= 0.001 "
        f"on 5 reference rows ({elapsed:.2f}s < 1s)",
    )


# ---------------------------------------------------------------------------
# 2. synthetic end-to-end run

ENSEMBLE_KINDS = ("dtree", "knn", "logreg", "nb", "svm")


def test_criterion_02_synthetic_end_to_end():
    start = time.perf_counter()
    corpus = gen_synthetic(n_langs=25, sents_per_lang=200, seed=42)
    train_part, _, test_part = split_corpus(
        corpus, SplitSpec(ratios=(0.8, 0.1, 0.1), seed=42)
    )
    vectorizer = fit_vectorizer(train_part, mode="char", ngram_range=(2, 6))
    dataset = build_dataset(train_part, vectorizer)
    test_vectors = [transform(vectorizer, r.text) for r in test_part]
    gold = [r.label for r in test_part]
    cfg = TrainConfig(seed=42)

    models = {kind: train(kind, dataset, cfg) for kind in ENSEMBLE_KINDS}
    nb_pred = [predict(models["nb"], v) for v in test_vectors]
    nb_f1 = evaluate(gold, nb_pred).macro_f1

    spec = EnsembleSpec(
        members=tuple(models[k] for k in ENSEMBLE_KINDS), mode="auto"
    )
    ens_pred = [ensemble_predict(spec, v) for v in test_vectors]
    ens_f1 = evaluate(gold, ens_pred).macro_f1

    elapsed = time.perf_counter() - start
    ok = nb_f1 >= 0.99 and ens_f1 >= 0.99 and elapsed < 120.0
    record(
        2,
        ok,
        f"synthetic 25x200 run: nb macro-F1 {nb_f1:.4f} >= 0.99, "
        f"5-member hard ensemble {ens_f1:.4f} >= 0.99 ({elapsed:.1f}s < 120s)",
    )


# ---------------------------------------------------------------------------
# 3. naive-bayes probabilities vs a brute-force oracle

def bayes_oracle_proba(X, y, n_labels, alpha, query):
    """Direct Bayes computation: smoothed likelihoods, products, normalize."""
    n, dim = X.shape
    joint = np.zeros(n_labels)
    for c in range(n_labels):
        rows = X[y == c]
        prior = len(rows) / n
        totals = rows.sum(axis=0)
        likelihood = (totals + alpha) / (totals.sum() + alpha * dim)
        joint[c] = math.log(prior) + float(query @ np.log(likelihood))
    shifted = np.exp(joint - joint.max())
    return shifted / shifted.sum()


def test_criterion_03_nb_oracle():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst = 0.0
    trials = 0
    while trials < 500:
        n = int(rng.integers(2, 7))
        dim = int(rng.integers(1, 5))
        k = int(rng.integers(2, 4))
        X = rng.integers(0, 4, size=(n, dim)).astype(float)
        y = np.concatenate([np.arange(k), rng.integers(0, k, size=n - k)]) \
            if n >= k else None
        if y is None:
            continue
        rng.shuffle(y)
        trials += 1
        label_list = [f"l{chr(97 + c)}a" for c in range(k)]
        vectors = [
            SparseVector(dim=dim, entries=tuple(
                (j, float(v)) for j, v in enumerate(row) if v
            ))
            for row in X
        ]
        data = LabeledDataset(vectors=vectors, labels=tuple(int(c) for c in y),
                              label_list=tuple(label_list))
        model = train("nb", data, TrainConfig(seed=0, nb_alpha=1.0))
        for _ in range(3):
            q = rng.integers(0, 4, size=dim).astype(float)
            qv = SparseVector(dim=dim, entries=tuple(
                (j, float(v)) for j, v in enumerate(q) if v
            ))
            ours = model.proba(qv)
            oracle = bayes_oracle_proba(X, y, k, 1.0, q)
            worst = max(worst, float(np.max(np.abs(ours - oracle))))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 10.0
    record(
        3,
        ok,
        f"nb vs brute-force Bayes oracle: worst |dp| {worst:.2e} <= 1e-9 "
        f"over 500 corpora ({elapsed:.1f}s < 10s)",
    )


# ---------------------------------------------------------------------------
# 4. logistic-regression gradient check

def test_criterion_04_logreg_gradients():
    from ilid.classifiers.linear import logreg_objective
    from ilid.features import stack_vectors

    start = time.perf_counter()
    rng = np.random.default_rng(7)
    eps = 1e-6
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 7))
        dim = int(rng.integers(2, 6))
        k = int(rng.integers(2, 5))
        l2 = float(rng.choice([0.0, 1e-4, 1e-2]))
        X = rng.normal(size=(n, dim)) * (rng.random((n, dim)) > 0.2)
        y = rng.integers(0, k, size=n)
        W = rng.normal(scale=0.5, size=(k, dim))
        b = rng.normal(scale=0.5, size=k)
        vectors = [
            SparseVector(dim=dim, entries=tuple(
                (j, float(v)) for j, v in enumerate(row) if v
            ))
            for row in X
        ]
        Xs = stack_vectors(vectors)
        _, grad_w, grad_b = logreg_objective(W, b, Xs, y, l2)

        def value(Wm, bm):
            return logreg_objective(Wm, bm, Xs, y, l2)[0]

        for i in range(k):
            for j in range(dim):
                Wp, Wm_ = W.copy(), W.copy()
                Wp[i, j] += eps
                Wm_[i, j] -= eps
                numeric = (value(Wp, b) - value(Wm_, b)) / (2 * eps)
                denom = max(abs(numeric), abs(grad_w[i, j]), 1e-8)
                worst = max(worst, abs(grad_w[i, j] - numeric) / denom)
            bp, bm = b.copy(), b.copy()
            bp[i] += eps
            bm[i] -= eps
            numeric = (value(W, bp) - value(W, bm)) / (2 * eps)
            denom = max(abs(numeric), abs(grad_b[i]), 1e-8)
            worst = max(worst, abs(grad_b[i] - numeric) / denom)
    elapsed = time.perf_counter() - start
    ok = worst < 1e-5 and elapsed < 30.0
    record(
        4,
        ok,
        f"logreg analytic vs central-difference gradients: worst relative "
        f"error {worst:.2e} < 1e-5 over 100 instances ({elapsed:.1f}s < 30s)",
    )


# ---------------------------------------------------------------------------
# 5. voting oracles

def test_criterion_05_voting_oracles():
    start = time.perf_counter()
    labels = ("laa", "lbb", "lcc")
    hard_ok = True
    for assignment in itertools.product(labels, repeat=5):
        counts = {l: assignment.count(l) for l in set(assignment)}
        top = max(counts.values())
        expected = min(l for l, c in counts.items() if c == top)
        hard_ok = hard_ok and vote_hard(list(assignment)) == expected

    rng = np.random.default_rng(99)
    soft_ok = True
    for _ in range(1000):
        members = int(rng.integers(1, 6))
        raw = rng.random((members, len(labels))) + 0.05
        # Occasionally force exact ties by repeating a row pattern.
        if rng.random() < 0.2:
            raw = np.tile(raw[:1], (members, 1))
            raw[:, 0] = raw[:, 1]
        dists = []
        for row in raw:
            row = row / row.sum()
            dists.append(dict(zip(labels, row.tolist())))
        totals = {l: sum(d[l] for d in dists) for l in labels}
        top = max(totals.values())
        expected = min(l for l in labels if totals[l] == top)
        soft_ok = soft_ok and vote_soft(dists) == expected
    elapsed = time.perf_counter() - start
    ok = hard_ok and soft_ok and elapsed < 5.0
    record(
        5,
        ok,
        f"vote_hard exact on all 243 five-member assignments, vote_soft "
        f"matches sum-argmax on 1000 sets ({elapsed:.1f}s < 5s)",
    )


# ---------------------------------------------------------------------------
# 6. throttle-delay arithmetic

THROTTLE_CASES = [
    ([2000, 4000], 1000.0, 3.0),
    ([1024], 1024.0, 1.0),
    ([0, 0, 0], 5.0, 0.0),
    ([1, 2, 3, 4], 2.0, 1.25),
    ([5000, 1000], 2000.0, 1.5),
    ([1024 * 1024] * 4, float(1024 * 1024), 1.0),
]


def test_criterion_06_throttle_exactness():
    exact = all(
        throttle_delay(sizes, ThrottleConfig(bandwidth=bw)) == expected
        for sizes, bw, expected in THROTTLE_CASES
    )
    record(
        6,
        exact,
        f"throttle_delay equals hand arithmetic exactly on "
        f"{len(THROTTLE_CASES)} fixed cases (incl. [2000,4000]@1000 -> 3.0)",
    )


# ---------------------------------------------------------------------------
# 7. split contract at scale

def test_criterion_07_split_contract(tmp_path):
    corpus = Corpus(records=tuple(
        SentenceRecord(label="eng", text=f"sentence number {i}")
        for i in range(10000)
    ))
    spec = SplitSpec(ratios=(0.8, 0.1, 0.1), seed=42)
    first = split_corpus(corpus, spec)
    second = split_corpus(corpus, spec)
    sizes = tuple(len(part) for part in first)

    payloads = []
    for run, parts in (("a", first), ("b", second)):
        blobs = []
        for name, part in zip(("train", "dev", "test"), parts):
            path = tmp_path / f"{run}-{name}.tsv"
            save_corpus(part, path)
            blobs.append(path.read_bytes())
        payloads.append(blobs)
    byte_identical = payloads[0] == payloads[1]

    texts = [set(r.text for r in part) for part in first]
    disjoint = (
        not (texts[0] & texts[1])
        and not (texts[0] & texts[2])
        and not (texts[1] & texts[2])
    )
    complete = texts[0] | texts[1] | texts[2] == {r.text for r in corpus}
    ok = sizes == (8000, 1000, 1000) and byte_identical and disjoint and complete
    record(
        7,
        ok,
        f"split 10000@0.8/0.1/0.1 -> {sizes[0]}/{sizes[1]}/{sizes[2]}, "
        f"byte-identical across runs, disjoint and complete",
    )


# ---------------------------------------------------------------------------
# 8. metric scores vs brute-force recomputation

def test_criterion_08_metric_oracle():
    start = time.perf_counter()
    rng = np.random.default_rng(4321)
    labels = ("laa", "lbb", "lcc", "ldd")
    worst = 0.0
    flags_consistent = True
    for _ in range(1000):
        n = int(rng.integers(1, 51))
        gold = [labels[i] for i in rng.integers(0, len(labels), size=n)]
        pred = [labels[i] for i in rng.integers(0, len(labels), size=n)]
        report = evaluate(gold, pred)
        for row in report.per_label:
            tp = sum(g == row.label and p == row.label for g, p in zip(gold, pred))
            fp = sum(g != row.label and p == row.label for g, p in zip(gold, pred))
            fn = sum(g == row.label and p != row.label for g, p in zip(gold, pred))
            precision = tp / (tp + fp) if tp + fp else 0.0
            recall = tp / (tp + fn) if tp + fn else 0.0
            f1 = (
                2 * precision * recall / (precision + recall)
                if precision + recall
                else 0.0
            )
            worst = max(
                worst,
                abs(row.precision - precision),
                abs(row.recall - recall),
                abs(row.f1 - f1),
                abs(row.support - (tp + fn)),
            )
            expected_flag = (tp + fp == 0) or (tp + fn == 0) or (
                precision + recall == 0
            )
            flags_consistent = flags_consistent and row.zero_division == expected_flag
        gold_rows = [r for r in report.per_label if r.support > 0]
        worst = max(
            worst,
            abs(report.macro_f1 - sum(r.f1 for r in gold_rows) / len(gold_rows)),
        )
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and flags_consistent
    record(
        8,
        ok,
        f"metrics vs brute-force tallies: worst deviation {worst:.2e} <= 1e-12 "
        f"over 1000 random pairs, zero-division flags exact ({elapsed:.1f}s)",
    )


# ---------------------------------------------------------------------------
# 9. determinism and round-trip sweep over every kind

def test_criterion_09_determinism_sweep(tmp_path):
    start = time.perf_counter()
    corpus = gen_synthetic(n_langs=5, sents_per_lang=24, seed=314)
    train_part, _, test_part = split_corpus(
        corpus, SplitSpec(ratios=(0.8, 0.1, 0.1), seed=314)
    )
    char_vz = fit_vectorizer(train_part, mode="char", ngram_range=(2, 4))
    hashed_cfg = TrainConfig(seed=1, ft_buckets=1 << 14, ft_dim=16,
                             forest_trees=20, svm_epochs=25)
    from ilid.features import HashedVectorizer

    hashed_vz = HashedVectorizer(bucket_count=hashed_cfg.ft_buckets)
    tfidf_data = build_dataset(train_part, char_vz)
    hashed_data = build_dataset(train_part, hashed_vz)

    byte_identical = True
    round_trip = True
    for kind in KINDS:
        data = hashed_data if kind == "ftstyle" else tfidf_data
        vz = hashed_vz if kind == "ftstyle" else char_vz
        paths = []
        for tag in ("a", "b"):
            model = train(kind, data, hashed_cfg)
            path = tmp_path / f"{kind}-{tag}.json"
            save_model(model, path)
            paths.append(path)
        byte_identical = byte_identical and (
            paths[0].read_bytes() == paths[1].read_bytes()
        )
        reloaded = load_model(paths[0])
        fresh = train(kind, data, hashed_cfg)
        for r in test_part:
            v = transform_any(vz, r.text)
            round_trip = round_trip and predict(reloaded, v) == predict(fresh, v)

    for tag, vz in (("single", char_vz),
                    ("combined", fit_combined(train_part, (1, 1), (2, 3))),
                    ("hashed", hashed_vz)):
        path_a = tmp_path / f"vz-{tag}-a.json"
        path_b = tmp_path / f"vz-{tag}-b.json"
        save_vectorizer(vz, path_a)
        save_vectorizer(vz, path_b)
        byte_identical = byte_identical and (
            path_a.read_bytes() == path_b.read_bytes()
        )
        loaded = load_vectorizer(path_a)
        for r in test_part:
            round_trip = round_trip and (
                transform_any(loaded, r.text) == transform_any(vz, r.text)
            )
    elapsed = time.perf_counter() - start
    ok = byte_identical and round_trip
    record(
        9,
        ok,
        f"all {len(KINDS)} kinds serialize byte-identically across retrains; "
        f"model and vectorizer round-trips predict identically ({elapsed:.1f}s)",
    )


# ---------------------------------------------------------------------------
# 10. optional external-dataset reproduction (never gating)

EXTERNAL_ENV = "ILID_DATA_DIR"


def test_criterion_10_external_reproduction():
    data_dir = os.environ.get(EXTERNAL_ENV)
    if not data_dir:
        record_skip(
            10,
            f"external dataset reproduction skipped ({EXTERNAL_ENV} unset); "
            "see scripts/reproduce_benchmark.py",
        )
        pytest.skip(f"{EXTERNAL_ENV} not set")
    root = Path(data_dir)
    train_path = root / "train.tsv"
    dev_path = root / "dev.tsv"
    if not train_path.exists() or not dev_path.exists():
        record_skip(10, f"missing train.tsv/dev.tsv under {root}")
        pytest.skip("external dataset incomplete")
    train_part = load_corpus(train_path)
    dev_part = load_corpus(dev_path)
    vectorizer = fit_combined(train_part)
    dataset = build_dataset(train_part, vectorizer)
    gold = [r.label for r in dev_part]
    outcomes = []
    for kind in ("logreg", "svm"):
        model = train(kind, dataset, TrainConfig(seed=42))
        pred = [
            predict(model, transform_any(vectorizer, r.text)) for r in dev_part
        ]
        outcomes.append((kind, evaluate(gold, pred).macro_f1))
    in_band = all(abs(f1 - 0.98) <= 0.03 for _, f1 in outcomes)
    detail = ", ".join(f"{kind} macro-F1 {f1:.4f}" for kind, f1 in outcomes)
    # Best-effort reproduction: the line reports the outcome either way and
    # an out-of-band score is informational, not a suite failure.
    RESULTS.append((10, "PASS" if in_band else "OUT-OF-BAND", detail))
    assert outcomes
