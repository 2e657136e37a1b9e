#!/usr/bin/env python3
"""Train every classifier kind on a synthetic corpus and print macro F1.

Runs the full pipeline end to end: generate the deterministic synthetic
corpus, split 80:10:10, fit character TF-IDF features (hashed subword counts
for the fastText-style model), train all nine kinds, and score each on the
held-out test split, followed by the five-member hard-voting ensemble.

Usage:
    python3 scripts/run_synthetic_benchmark.py [--langs 25] [--sents 200]
                                               [--seed 42]
"""
import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from ilid.classifiers import KINDS, predict, train
from ilid.classifiers.base import TrainConfig
from ilid.corpus import SplitSpec, split_corpus
from ilid.ensemble import EnsembleSpec, ensemble_predict
from ilid.features import HashedVectorizer, fit_vectorizer, transform_any
from ilid.metrics import evaluate
from ilid.pipeline import build_dataset
from ilid.synth import gen_synthetic

ENSEMBLE_KINDS = ("dtree", "knn", "logreg", "nb", "svm")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--langs", type=int, default=25)
    parser.add_argument("--sents", type=int, default=200)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args(argv)

    corpus = gen_synthetic(args.langs, args.sents, args.seed)
    train_part, dev_part, test_part = split_corpus(
        corpus, SplitSpec(ratios=(0.8, 0.1, 0.1), seed=args.seed)
    )
    print(
        f"corpus: {len(corpus)} records over {len(corpus.label_set)} labels "
        f"-> split {len(train_part)}/{len(dev_part)}/{len(test_part)}"
    )

    cfg = TrainConfig(seed=args.seed)
    char_vz = fit_vectorizer(train_part, mode="char", ngram_range=(2, 6))
    hashed_vz = HashedVectorizer(bucket_count=cfg.ft_buckets)
    char_data = build_dataset(train_part, char_vz)
    hashed_data = build_dataset(train_part, hashed_vz)
    gold = [r.label for r in test_part]

    models = {}
    print(f"{'kind':<10} {'macro-F1':>9} {'train s':>8}")
    for kind in KINDS:
        vz = hashed_vz if kind == "ftstyle" else char_vz
        data = hashed_data if kind == "ftstyle" else char_data
        start = time.perf_counter()
        model = train(kind, data, cfg)
        elapsed = time.perf_counter() - start
        models[kind] = (model, vz)
        pred = [predict(model, transform_any(vz, r.text)) for r in test_part]
        print(f"{kind:<10} {evaluate(gold, pred).macro_f1:>9.4f} {elapsed:>8.2f}")

    spec = EnsembleSpec(
        members=tuple(models[k][0] for k in ENSEMBLE_KINDS), mode="auto"
    )
    pred = [
        ensemble_predict(spec, transform_any(char_vz, r.text)) for r in test_part
    ]
    name = "+".join(ENSEMBLE_KINDS)
    print(f"hard ensemble ({name}): macro-F1 {evaluate(gold, pred).macro_f1:.4f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
