"""Labeled-corpus data model: ingestion, filtering, splitting, statistics.

A corpus is an ordered list of (label, sentence) records. Labels follow the
ISO 639-2 convention, three lowercase letters with an optional four-letter
script tag ("hin", "mni_Beng", "snd_Arab"). File formats:

* TSV: ``<label>\\t<text>`` per line, UTF-8, no header, LF endings.
* JSONL: one object per line with members ``"label"`` and ``"text"``.
* Rejection log: TSV of ``<line>\\t<reason>``.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import textproc
from .errors import CapabilityError, ParseError, ValidationError

LABEL_PATTERN = re.compile(r"^[a-z]{3}(_[A-Za-z]{4})?$")

#: The default 25-label schema: English plus the 22 scheduled Indian
#: languages, with Manipuri and Sindhi split by script.
DEFAULT_LABELS = (
    "asm", "ben", "brx", "doi", "eng", "gom", "guj", "hin", "kan", "kas",
    "mai", "mal", "mar", "mni_Beng", "mni_Mtei", "npi", "ory", "pan", "san",
    "sat", "snd_Arab", "snd_Deva", "tam", "tel", "urd",
)

#: Which script each default label is expected to be written in.
LABEL_SCRIPTS = {
    "asm": "Bengali",
    "ben": "Bengali",
    "brx": "Devanagari",
    "doi": "Devanagari",
    "eng": "Latin",
    "gom": "Devanagari",
    "guj": "Gujarati",
    "hin": "Devanagari",
    "kan": "Kannada",
    "kas": "Perso-Arabic",
    "mai": "Devanagari",
    "mal": "Malayalam",
    "mar": "Devanagari",
    "mni_Beng": "Bengali",
    "mni_Mtei": "Meitei-Mayek",
    "npi": "Devanagari",
    "ory": "Odia",
    "pan": "Gurmukhi",
    "san": "Devanagari",
    "sat": "Ol-Chiki",
    "snd_Arab": "Perso-Arabic",
    "snd_Deva": "Devanagari",
    "tam": "Tamil",
    "tel": "Telugu",
    "urd": "Perso-Arabic",
}


@dataclass(frozen=True)
class SentenceRecord:
    label: str
    text: str

    def __post_init__(self):
        if not LABEL_PATTERN.match(self.label):
            raise ValidationError(f"invalid label {self.label!r}")
        if not self.text.strip():
            raise ValidationError(f"empty text for label {self.label!r}")


@dataclass(frozen=True)
class Corpus:
    records: tuple

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))

    @property
    def label_set(self) -> list:
        return sorted({r.label for r in self.records})

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


@dataclass(frozen=True)
class SplitSpec:
    """Train/dev/test ratios plus the shuffle seed."""

    ratios: tuple = (0.8, 0.1, 0.1)
    seed: int = 42

    def __post_init__(self):
        ratios = tuple(float(r) for r in self.ratios)
        object.__setattr__(self, "ratios", ratios)
        if len(ratios) != 3 or any(r < 0 for r in ratios):
            raise ValidationError(f"ratios must be three non-negative reals: {ratios}")
        if abs(sum(ratios) - 1.0) > 1e-12:
            raise ValidationError(f"ratios must sum to 1: {ratios}")


@dataclass(frozen=True)
class LabelStats:
    label: str
    sentences: int
    words: int
    chars: int
    avg_word_len: float
    avg_sent_len: float
    unique_words: int
    ttr_words: float
    degenerate: bool = False


@dataclass(frozen=True)
class CorpusStats:
    rows: tuple

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))


def derive_stats_row(label, sentences, words, chars, unique_words) -> LabelStats:
    """Build one statistics row from raw counts.

    The derived values satisfy, by construction:
    ``avg_sent_len * sentences == chars`` and
    ``avg_word_len * words == chars - (words - sentences)`` — word length
    excludes the single inter-word separators that are counted in ``chars``.
    A label with zero words reports ttr 0 and is flagged degenerate.
    """
    avg_sent_len = chars / sentences if sentences else 0.0
    if words:
        avg_word_len = (chars - (words - sentences)) / words
        ttr = unique_words / words
    else:
        avg_word_len = 0.0
        ttr = 0.0
    return LabelStats(
        label=label,
        sentences=sentences,
        words=words,
        chars=chars,
        avg_word_len=avg_word_len,
        avg_sent_len=avg_sent_len,
        unique_words=unique_words,
        ttr_words=ttr,
        degenerate=words == 0,
    )


def compute_stats(corpus: Corpus) -> CorpusStats:
    """Per-label sentence/word/character counts and lexical-diversity ratios.

    Words are tokens that are not purely punctuation; characters count the
    code points of the words plus one space per inter-word gap.
    """
    per_label = {}
    for record in corpus:
        tokens = textproc.tokenize_words(record.text)
        words = [t for t in tokens if not textproc.is_punctuation_token(t)]
        bucket = per_label.setdefault(record.label, [0, 0, 0, set()])
        bucket[0] += 1
        bucket[1] += len(words)
        bucket[2] += sum(len(w) for w in words) + max(len(words) - 1, 0)
        bucket[3].update(words)
    rows = [
        derive_stats_row(label, s, w, c, len(uniq))
        for label, (s, w, c, uniq) in sorted(per_label.items())
    ]
    return CorpusStats(rows=tuple(rows))


# ---------------------------------------------------------------------------
# ingestion / serialization

def _infer_format(path, fmt):
    if fmt is not None:
        return fmt
    return "jsonl" if str(path).endswith(".jsonl") else "tsv"


def load_corpus(path, fmt=None) -> Corpus:
    """Read a TSV or JSONL corpus; parse errors carry the 1-based line."""
    fmt = _infer_format(path, fmt)
    if fmt not in ("tsv", "jsonl"):
        raise ValidationError(f"unknown corpus format {fmt!r}")
    data = Path(path).read_bytes()
    text = data.decode("utf-8")
    records = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        line = line.rstrip("\r")
        if not line.strip():
            continue
        if fmt == "tsv":
            if "\t" not in line:
                raise ParseError("expected <label>\\t<text>", line=lineno)
            label, body = line.split("\t", 1)
        else:
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", line=lineno) from exc
            if not isinstance(obj, dict) or "label" not in obj or "text" not in obj:
                raise ParseError('object must have "label" and "text"', line=lineno)
            label, body = obj["label"], obj["text"]
            if not isinstance(label, str) or not isinstance(body, str):
                raise ParseError('"label" and "text" must be strings', line=lineno)
        try:
            records.append(SentenceRecord(label=label, text=body))
        except ValidationError as exc:
            raise ParseError(str(exc), line=lineno) from exc
    return Corpus(records=tuple(records))


def save_corpus(corpus: Corpus, path, fmt=None) -> None:
    """Write the corpus; ``load_corpus`` of the result reproduces it."""
    fmt = _infer_format(path, fmt)
    if fmt not in ("tsv", "jsonl"):
        raise ValidationError(f"unknown corpus format {fmt!r}")
    lines = []
    for record in corpus:
        if fmt == "tsv":
            if any(ch in record.text for ch in "\t\n\r"):
                raise ValidationError(
                    f"text contains tab/newline, not representable in TSV: {record.text!r}"
                )
            lines.append(f"{record.label}\t{record.text}")
        else:
            lines.append(
                json.dumps({"label": record.label, "text": record.text}, ensure_ascii=False)
            )
    body = "".join(line + "\n" for line in lines)
    Path(path).write_bytes(body.encode("utf-8"))


def save_rejections(rejections, path) -> None:
    body = "".join(f"{line}\t{reason}\n" for line, reason in rejections)
    Path(path).write_bytes(body.encode("utf-8"))


# ---------------------------------------------------------------------------
# filtering

def noise_filter(
    corpus: Corpus,
    min_chars: int = 10,
    min_words: int = 3,
    script_purity: float = 0.7,
    profiles=textproc.DEFAULT_PROFILES,
    expected_script=None,
):
    """Drop duplicate, very short, and wrong-script records.

    Keeps the first occurrence of each exact (label, text) pair; drops records
    shorter than ``min_chars`` code points or ``min_words`` tokens; drops
    records whose letter fraction in the label's expected script falls below
    ``script_purity``. Returns ``(filtered_corpus, rejections)`` where each
    rejection is ``(1-based input line, reason)``. Idempotent.
    """
    if min_chars < 0 or min_words < 0:
        raise ValidationError("min_chars and min_words must be non-negative")
    if not 0.0 <= script_purity <= 1.0:
        raise ValidationError("script_purity must be within [0, 1]")
    if expected_script is None:
        expected_script = LABEL_SCRIPTS
    if script_purity > 0:
        for label in sorted({r.label for r in corpus}):
            if label not in expected_script:
                raise ValidationError(f"no expected script configured for label {label!r}")

    kept = []
    rejections = []
    seen = set()
    for lineno, record in enumerate(corpus, start=1):
        key = (record.label, record.text)
        if key in seen:
            rejections.append((lineno, "duplicate"))
            continue
        seen.add(key)
        if len(record.text) < min_chars or len(textproc.tokenize_words(record.text)) < min_words:
            rejections.append((lineno, "too_short"))
            continue
        if script_purity > 0:
            fractions = textproc.detect_script(record.text, profiles)
            if fractions.get(expected_script[record.label], 0.0) < script_purity:
                rejections.append((lineno, "script_mismatch"))
                continue
        kept.append(record)
    return Corpus(records=tuple(kept)), rejections


def confidence_filter(corpus: Corpus, scorer, threshold: float = 0.7):
    """Keep records the scorer assigns probability >= threshold to their label.

    ``scorer`` is any object exposing ``label_list``, ``supports_probability``
    and ``predict_proba_text(text) -> {label: probability}`` (for instance
    :class:`ilid.pipeline.TextClassifier`). Returns ``(corpus, rejections)``.
    """
    if not getattr(scorer, "supports_probability", False):
        raise CapabilityError("confidence filtering needs a probability-capable model")
    missing = set(corpus.label_set) - set(scorer.label_list)
    if missing:
        raise ValidationError(f"scorer does not cover labels: {sorted(missing)}")
    kept = []
    rejections = []
    for lineno, record in enumerate(corpus, start=1):
        proba = scorer.predict_proba_text(record.text)
        if proba.get(record.label, 0.0) >= threshold:
            kept.append(record)
        else:
            rejections.append((lineno, "low_confidence"))
    return Corpus(records=tuple(kept)), rejections


# ---------------------------------------------------------------------------
# splitting

def split_corpus(corpus: Corpus, spec: SplitSpec):
    """Stratified train/dev/test split.

    Per label with n records: train takes floor(n*r1), dev floor(n*r2), test
    the remainder. Assignment depends only on record order and the seed; the
    three parts partition the corpus and keep the original record order.
    """
    r1, r2, _ = spec.ratios
    by_label = {}
    for pos, record in enumerate(corpus):
        by_label.setdefault(record.label, []).append(pos)
    rng = np.random.default_rng(spec.seed)
    train_idx, dev_idx, test_idx = [], [], []
    for label in sorted(by_label):
        positions = by_label[label]
        perm = rng.permutation(len(positions))
        n = len(positions)
        n_train = math.floor(n * r1)
        n_dev = math.floor(n * r2)
        shuffled = [positions[i] for i in perm]
        train_idx.extend(shuffled[:n_train])
        dev_idx.extend(shuffled[n_train : n_train + n_dev])
        test_idx.extend(shuffled[n_train + n_dev :])
    parts = []
    for idx in (train_idx, dev_idx, test_idx):
        idx.sort()
        parts.append(Corpus(records=tuple(corpus.records[i] for i in idx)))
    return tuple(parts)


# ---------------------------------------------------------------------------
# statistics rendering

_STATS_COLUMNS = (
    "label", "sentences", "words", "chars",
    "avg_word_len", "avg_sent_len", "unique_words", "ttr_words",
)


def render_stats(stats: CorpusStats, fmt: str = "table") -> str:
    """Render statistics as an aligned table, TSV, or JSON."""
    if fmt == "json":
        payload = [
            {col: getattr(row, col) for col in _STATS_COLUMNS} | {"degenerate": row.degenerate}
            for row in stats.rows
        ]
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if fmt == "tsv":
        lines = ["\t".join(_STATS_COLUMNS)]
        for row in stats.rows:
            lines.append(
                "\t".join(repr(v) if isinstance(v, float) else str(v)
                          for v in (getattr(row, c) for c in _STATS_COLUMNS))
            )
        return "\n".join(lines) + "\n"
    if fmt == "table":
        header = f"{'label':<10} {'sents':>8} {'words':>9} {'chars':>10} {'aw_len':>7} {'as_len':>8} {'uniq':>8} {'ttr':>6}"
        lines = [header, "-" * len(header)]
        for row in stats.rows:
            lines.append(
                f"{row.label:<10} {row.sentences:>8} {row.words:>9} {row.chars:>10} "
                f"{row.avg_word_len:>7.3f} {row.avg_sent_len:>8.3f} {row.unique_words:>8} {row.ttr_words:>6.3f}"
            )
        return "\n".join(lines) + "\n"
    raise ValidationError(f"unknown stats format {fmt!r}")
