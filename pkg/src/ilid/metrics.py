"""Confusion matrices, per-label precision/recall/F1, macro aggregation.

Zero-division convention: any 0/0 is defined as 0 and the affected row is
flagged. Macro metrics are unweighted means over the labels present in the
gold standard, so a model predicting a spurious extra label cannot shrink
the averaging denominator; spurious labels still get per-label rows with
support 0.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ValidationError

_TSV_HEADER = "label\tprecision\trecall\tf1\tsupport"
_MACRO_ROW = "macro"


@dataclass(frozen=True)
class ConfusionMatrix:
    labels: tuple
    counts: np.ndarray  # rows = gold, columns = predicted

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        counts = np.asarray(self.counts, dtype=np.int64)
        object.__setattr__(self, "counts", counts)
        n = len(self.labels)
        if counts.shape != (n, n):
            raise ValidationError(
                f"counts must be {n}x{n}, got {counts.shape}"
            )
        if (counts < 0).any():
            raise ValidationError("confusion counts must be non-negative")
        if list(self.labels) != sorted(set(self.labels)):
            raise ValidationError("labels must be sorted and duplicate-free")


@dataclass(frozen=True)
class LabelScore:
    label: str
    precision: float
    recall: float
    f1: float
    support: int
    zero_division: bool = False


@dataclass(frozen=True)
class EvalReport:
    per_label: tuple
    macro_precision: float
    macro_recall: float
    macro_f1: float

    def __post_init__(self):
        object.__setattr__(self, "per_label", tuple(self.per_label))


def confusion(gold, pred) -> ConfusionMatrix:
    """Tally counts[gold][pred] over the sorted union of observed labels."""
    gold = list(gold)
    pred = list(pred)
    if len(gold) != len(pred):
        raise ValidationError(
            f"gold and pred lengths differ: {len(gold)} vs {len(pred)}"
        )
    labels = sorted(set(gold) | set(pred))
    index = {label: i for i, label in enumerate(labels)}
    counts = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for g, p in zip(gold, pred):
        counts[index[g], index[p]] += 1
    return ConfusionMatrix(labels=tuple(labels), counts=counts)


def scores(cm: ConfusionMatrix) -> EvalReport:
    """Per-label precision/recall/F1 plus gold-support macro averages."""
    counts = cm.counts
    rows = []
    macro_rows = []
    for i, label in enumerate(cm.labels):
        tp = int(counts[i, i])
        fp = int(counts[:, i].sum()) - tp
        fn = int(counts[i, :].sum()) - tp
        support = tp + fn
        zero_division = False
        if tp + fp > 0:
            precision = tp / (tp + fp)
        else:
            precision, zero_division = 0.0, True
        if tp + fn > 0:
            recall = tp / (tp + fn)
        else:
            recall, zero_division = 0.0, True
        if precision + recall > 0:
            f1 = 2 * precision * recall / (precision + recall)
        else:
            f1, zero_division = 0.0, True
        row = LabelScore(label, precision, recall, f1, support, zero_division)
        rows.append(row)
        if support > 0:
            macro_rows.append(row)
    if macro_rows:
        macro_p = sum(r.precision for r in macro_rows) / len(macro_rows)
        macro_r = sum(r.recall for r in macro_rows) / len(macro_rows)
        macro_f = sum(r.f1 for r in macro_rows) / len(macro_rows)
    else:
        macro_p = macro_r = macro_f = 0.0
    return EvalReport(
        per_label=tuple(rows),
        macro_precision=macro_p,
        macro_recall=macro_r,
        macro_f1=macro_f,
    )


def evaluate(gold, pred) -> EvalReport:
    return scores(confusion(gold, pred))


def render_report(report: EvalReport, fmt: str = "table") -> str:
    """Aligned 2-decimal table, lossless TSV, or lossless JSON."""
    if fmt == "table":
        header = f"{'label':<10} {'prec':>6} {'recall':>6} {'f1':>6} {'support':>8}"
        lines = [header, "-" * len(header)]
        for row in report.per_label:
            lines.append(
                f"{row.label:<10} {row.precision:>6.2f} {row.recall:>6.2f} "
                f"{row.f1:>6.2f} {row.support:>8}"
            )
        lines.append("-" * len(header))
        lines.append(
            f"{'macro':<10} {report.macro_precision:>6.2f} "
            f"{report.macro_recall:>6.2f} {report.macro_f1:>6.2f} "
            f"{sum(r.support for r in report.per_label):>8}"
        )
        return "\n".join(lines) + "\n"
    if fmt == "tsv":
        lines = [_TSV_HEADER]
        for row in report.per_label:
            lines.append(
                f"{row.label}\t{row.precision!r}\t{row.recall!r}\t{row.f1!r}\t{row.support}"
            )
        lines.append(
            f"{_MACRO_ROW}\t{report.macro_precision!r}\t{report.macro_recall!r}"
            f"\t{report.macro_f1!r}\t{sum(r.support for r in report.per_label)}"
        )
        return "\n".join(lines) + "\n"
    if fmt == "json":
        payload = {
            "per_label": [
                {
                    "label": row.label,
                    "precision": row.precision,
                    "recall": row.recall,
                    "f1": row.f1,
                    "support": row.support,
                    "zero_division": row.zero_division,
                }
                for row in report.per_label
            ],
            "macro_precision": report.macro_precision,
            "macro_recall": report.macro_recall,
            "macro_f1": report.macro_f1,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    raise ValidationError(f"unknown report format {fmt!r}")


def parse_report_tsv(text: str) -> EvalReport:
    """Inverse of ``render_report(..., "tsv")`` up to zero-division flags.

    The TSV carries the pinned five columns only, so flags are not
    round-tripped; re-rendering the parsed report is byte-identical.
    """
    lines = [line for line in text.split("\n") if line]
    if not lines or lines[0] != _TSV_HEADER:
        raise ParseError("missing report header", line=1)
    per_label = []
    macro = None
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != 5:
            raise ParseError("expected five tab-separated columns", line=lineno)
        name, p, r, f1, support = parts
        try:
            values = (float(p), float(r), float(f1), int(support))
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from exc
        if name == _MACRO_ROW:
            macro = values
        else:
            per_label.append(LabelScore(name, values[0], values[1], values[2], values[3]))
    if macro is None:
        raise ParseError("missing macro row", line=len(lines))
    return EvalReport(
        per_label=tuple(per_label),
        macro_precision=macro[0],
        macro_recall=macro[1],
        macro_f1=macro[2],
    )
