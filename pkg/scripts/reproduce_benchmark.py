#!/usr/bin/env python3
"""Reproduce the published dev-set benchmark on an externally supplied corpus.

Expects a directory (``--data-dir`` or the ILID_DATA_DIR environment
variable) containing ``train.tsv`` and ``dev.tsv`` in the two-column
``label<TAB>text`` format. Trains logistic regression and the linear SVM on
combined word(1,2)+char(2,6) TF-IDF features and reports dev macro F1
against the published band of 0.98 +/- 0.03.

Exit status: 0 when both models land in the band, 1 when either falls
outside it, 2 on a missing or unreadable dataset.
"""
import argparse
import os
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from ilid.classifiers import predict, train
from ilid.classifiers.base import TrainConfig
from ilid.corpus import load_corpus
from ilid.errors import LidError
from ilid.features import fit_combined, transform_any
from ilid.metrics import evaluate
from ilid.pipeline import build_dataset

TARGET = 0.98
BAND = 0.03


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--data-dir",
        default=os.environ.get("ILID_DATA_DIR"),
        help="directory with train.tsv and dev.tsv (default: $ILID_DATA_DIR)",
    )
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args(argv)
    if not args.data_dir:
        print("no dataset: pass --data-dir or set ILID_DATA_DIR", file=sys.stderr)
        return 2
    root = Path(args.data_dir)
    try:
        train_part = load_corpus(root / "train.tsv")
        dev_part = load_corpus(root / "dev.tsv")
    except (OSError, LidError) as exc:
        print(f"cannot load dataset: {exc}", file=sys.stderr)
        return 2

    print(
        f"train: {len(train_part)} records / {len(train_part.label_set)} labels, "
        f"dev: {len(dev_part)} records"
    )
    start = time.perf_counter()
    vectorizer = fit_combined(train_part)
    dataset = build_dataset(train_part, vectorizer)
    print(f"combined features: dim {dataset.vectors[0].dim} "
          f"({time.perf_counter() - start:.1f}s)")
    gold = [r.label for r in dev_part]

    in_band = True
    for kind in ("logreg", "svm"):
        start = time.perf_counter()
        model = train(kind, dataset, TrainConfig(seed=args.seed))
        pred = [
            predict(model, transform_any(vectorizer, r.text)) for r in dev_part
        ]
        f1 = evaluate(gold, pred).macro_f1
        verdict = "within" if abs(f1 - TARGET) <= BAND else "OUTSIDE"
        in_band = in_band and verdict == "within"
        print(
            f"{kind}: dev macro-F1 {f1:.4f} -> {verdict} {TARGET}+/-{BAND} "
            f"({time.perf_counter() - start:.1f}s)"
        )
    return 0 if in_band else 1


if __name__ == "__main__":
    raise SystemExit(main())
