"""Command-line interface: clean, split, stats, train, predict, evaluate,
ensemble, harvest, and synthetic-corpus generation.

Exit codes: 0 success, 1 validation/usage error, 2 I/O error. The random
seed defaults to 42, may be set via the ILID_SEED environment variable, and
per-command ``--seed`` flags override both. Identical invocations produce
byte-identical output files.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import classifiers, corpus, ensemble, features, harvest, metrics, pipeline, synth
from .corpus import SplitSpec
from .errors import LidError, ValidationError

#: CLI algorithm names to classifier kinds.
ALGO_KINDS = {
    "nb": "nb",
    "lr": "logreg",
    "svm": "svm",
    "sgd": "sgd",
    "knn": "knn",
    "dt": "dtree",
    "rf": "rforest",
    "ada": "adaboost",
    "ftstyle": "ftstyle",
}

DEFAULT_SEED = 42


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Argparse that reports usage problems as exit code 1, not 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _UsageError(message)


def _resolve_seed(explicit) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get("ILID_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"ILID_SEED must be an integer, got {env!r}")
    return DEFAULT_SEED


def _parse_ratios(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValidationError(f"ratios must be three comma-separated reals: {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise ValidationError(f"ratios must be three comma-separated reals: {text!r}")


def _load_text_classifier(model_path, vectorizer_path) -> pipeline.TextClassifier:
    model = classifiers.load_model(model_path)
    vectorizer = features.load_vectorizer(vectorizer_path)
    return pipeline.TextClassifier(vectorizer=vectorizer, model=model)


# ---------------------------------------------------------------------------
# subcommand handlers

def _cmd_clean(args):
    data = corpus.load_corpus(args.infile)
    kept, rejections = corpus.noise_filter(
        data,
        min_chars=args.min_chars,
        min_words=args.min_words,
        script_purity=args.script_purity,
    )
    corpus.save_corpus(kept, args.out)
    if args.rejects:
        corpus.save_rejections(rejections, args.rejects)
    print(f"kept {len(kept)} records, rejected {len(rejections)}")


def _cmd_filter_confidence(args):
    scorer = _load_text_classifier(args.model, args.vectorizer)
    data = corpus.load_corpus(args.infile)
    kept, rejections = corpus.confidence_filter(data, scorer, args.threshold)
    corpus.save_corpus(kept, args.out)
    if args.rejects:
        corpus.save_rejections(rejections, args.rejects)
    print(f"kept {len(kept)} records, rejected {len(rejections)}")


def _cmd_split(args):
    data = corpus.load_corpus(args.infile)
    spec = SplitSpec(ratios=_parse_ratios(args.ratios), seed=_resolve_seed(args.seed))
    train_part, dev_part, test_part = corpus.split_corpus(data, spec)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ext = ".jsonl" if str(args.infile).endswith(".jsonl") else ".tsv"
    for name, part in (("train", train_part), ("dev", dev_part), ("test", test_part)):
        corpus.save_corpus(part, out_dir / f"{name}{ext}")
    print(f"train {len(train_part)}  dev {len(dev_part)}  test {len(test_part)}")


def _cmd_stats(args):
    data = corpus.load_corpus(args.infile)
    sys.stdout.write(corpus.render_stats(corpus.compute_stats(data), args.format))


def _cmd_train(args):
    data = corpus.load_corpus(args.train)
    cfg = classifiers.TrainConfig(seed=_resolve_seed(args.seed))
    tc = pipeline.train_text_classifier(
        data, ALGO_KINDS[args.algo], feature_mode=args.features, cfg=cfg
    )
    classifiers.save_model(tc.model, args.model_out)
    features.save_vectorizer(tc.vectorizer, args.vectorizer_out)
    print(
        f"trained {tc.model.kind} on {len(data)} records, "
        f"{len(tc.label_list)} labels, feature dim {tc.model.feature_dim}"
    )


def _read_prediction_inputs(path):
    """Texts to classify: corpus files by extension, else raw lines."""
    name = str(path)
    if name.endswith(".tsv") or name.endswith(".jsonl"):
        return [record.text for record in corpus.load_corpus(path)]
    raw = Path(path).read_bytes().decode("utf-8")
    return [line.replace("\t", " ") for line in raw.split("\n") if line.strip()]


def _cmd_predict(args):
    tc = _load_text_classifier(args.model, args.vectorizer)
    texts = _read_prediction_inputs(args.infile)
    lines = [f"{tc.predict_text(text)}\t{text}" for text in texts]
    Path(args.out).write_bytes(
        "".join(line + "\n" for line in lines).encode("utf-8")
    )
    print(f"predicted {len(lines)} records")


def _cmd_eval(args):
    gold = corpus.load_corpus(args.gold)
    pred = corpus.load_corpus(args.pred)
    report = metrics.evaluate(
        [r.label for r in gold], [r.label for r in pred]
    )
    rendered = metrics.render_report(report, args.format)
    if args.report:
        Path(args.report).write_bytes(rendered.encode("utf-8"))
        print(f"macro_f1 {report.macro_f1:.4f}")
    else:
        sys.stdout.write(rendered)


def _cmd_ensemble(args):
    spec = ensemble.load_ensemble_file(args.spec)
    vectorizer = features.load_vectorizer(args.vectorizer)
    data = corpus.load_corpus(args.infile)
    lines = []
    for record in data:
        vector = features.transform_any(vectorizer, record.text)
        lines.append(f"{ensemble.ensemble_predict(spec, vector)}\t{record.text}")
    Path(args.out).write_bytes(
        "".join(line + "\n" for line in lines).encode("utf-8")
    )
    print(f"predicted {len(lines)} records with {len(spec.members)} members")


def _cmd_harvest(args):
    sites = harvest.load_page_dir(args.pages)
    cfg = harvest.ThrottleConfig(bandwidth=args.bandwidth)
    schedule = harvest.schedule_fetch(sites, cfg)
    harvest.save_schedule(schedule, args.plan_out)
    print(f"scheduled {len(schedule)} pages across {len(sites)} sites")


def _cmd_gen_synth(args):
    data = synth.gen_synthetic(
        n_langs=args.langs, sents_per_lang=args.sents, seed=_resolve_seed(args.seed)
    )
    corpus.save_corpus(data, args.out)
    print(f"wrote {len(data)} records, {len(data.label_set)} labels")


# ---------------------------------------------------------------------------
# parser wiring

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ilid", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("clean", help="deduplicate and noise-filter a corpus")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--min-chars", type=int, default=10)
    p.add_argument("--min-words", type=int, default=3)
    p.add_argument("--script-purity", type=float, default=0.7)
    p.add_argument("--rejects", help="optional rejection-log TSV path")
    p.set_defaults(handler=_cmd_clean)

    p = sub.add_parser(
        "filter-confidence", help="drop records a model scores below threshold"
    )
    p.add_argument("--model", required=True)
    p.add_argument("--vectorizer", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--threshold", type=float, default=0.7)
    p.add_argument("--rejects", help="optional rejection-log TSV path")
    p.set_defaults(handler=_cmd_filter_confidence)

    p = sub.add_parser("split", help="stratified train/dev/test split")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--ratios", default="0.8,0.1,0.1")
    p.add_argument("--seed", type=int)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(handler=_cmd_split)

    p = sub.add_parser("stats", help="per-label corpus statistics")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--format", choices=("table", "tsv", "json"), default="table")
    p.set_defaults(handler=_cmd_stats)

    p = sub.add_parser("train", help="fit features and train one classifier")
    p.add_argument("--algo", choices=sorted(ALGO_KINDS), required=True)
    p.add_argument(
        "--features", choices=pipeline.FEATURE_MODES, default="combined",
        help="TF-IDF regime (ignored by ftstyle, which hashes subwords)",
    )
    p.add_argument("--train", required=True)
    p.add_argument("--model-out", required=True)
    p.add_argument("--vectorizer-out", required=True)
    p.add_argument("--seed", type=int)
    p.set_defaults(handler=_cmd_train)

    p = sub.add_parser("predict", help="label sentences with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--vectorizer", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_predict)

    p = sub.add_parser("eval", help="score predictions against gold labels")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--report", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("table", "tsv", "json"), default="table")
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("ensemble", help="vote member models over a corpus")
    p.add_argument("--spec", required=True)
    p.add_argument("--vectorizer", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_ensemble)

    p = sub.add_parser("harvest", help="plan throttled fetches of a page corpus")
    p.add_argument("--pages", required=True)
    p.add_argument("--bandwidth", type=float, default=harvest.DEFAULT_BANDWIDTH)
    p.add_argument("--plan-out", required=True)
    p.set_defaults(handler=_cmd_harvest)

    p = sub.add_parser("gen-synth", help="generate a synthetic labeled corpus")
    p.add_argument("--langs", type=int, default=25)
    p.add_argument("--sents", type=int, default=200)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_gen_synth)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError:
        return 1
    try:
        args.handler(args)
    except LidError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except UnicodeDecodeError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    return 0


def entrypoint():
    sys.exit(run())


if __name__ == "__main__":
    entrypoint()
