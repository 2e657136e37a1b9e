"""Synthetic multi-language corpus generator for end-to-end exercises.

Each pseudo-language owns a disjoint slice of eight letters from the CJK
unified-ideograph block, so languages never share a character and remain
separable by character n-grams alone. A language's vocabulary is six words
of two to four letters; every sentence contains the language's two-letter
signature word (its first two letters, a guaranteed per-language marker),
plus three to five words drawn with replacement from the vocabulary.
Generation is a pure function of (n_langs, sents_per_lang, seed).
"""
from __future__ import annotations

import numpy as np

from .corpus import Corpus, SentenceRecord
from .errors import ValidationError

_LETTER_BASE = 0x4E00
_LETTERS_PER_LANG = 8
_WORDS_PER_LANG = 6
MAX_LANGS = 256


def synth_label(i: int) -> str:
    """Deterministic three-letter label for pseudo-language ``i``: xaa, xab, ..."""
    return f"x{chr(97 + i // 26)}{chr(97 + i % 26)}"


def _language_vocab(i: int, rng) -> list:
    letters = [chr(_LETTER_BASE + _LETTERS_PER_LANG * i + j)
               for j in range(_LETTERS_PER_LANG)]
    signature = letters[0] + letters[1]
    vocab = [signature]
    while len(vocab) < _WORDS_PER_LANG:
        length = int(rng.integers(2, 5))
        word = "".join(letters[int(k)] for k in rng.integers(0, len(letters), length))
        if word not in vocab:
            vocab.append(word)
    return vocab


def gen_synthetic(n_langs: int = 25, sents_per_lang: int = 200, seed: int = 42) -> Corpus:
    """Corpus of ``n_langs * sents_per_lang`` records, grouped by label."""
    if not 2 <= n_langs <= MAX_LANGS:
        raise ValidationError(f"n_langs must be within [2, {MAX_LANGS}]")
    if sents_per_lang < 1:
        raise ValidationError("sents_per_lang must be positive")
    rng = np.random.default_rng(seed)
    records = []
    for i in range(n_langs):
        label = synth_label(i)
        vocab = _language_vocab(i, rng)
        signature = vocab[0]
        for _ in range(sents_per_lang):
            n_words = int(rng.integers(3, 6))
            words = [vocab[int(k)] for k in rng.integers(0, len(vocab), n_words)]
            position = int(rng.integers(0, n_words + 1))
            words.insert(position, signature)
            records.append(SentenceRecord(label=label, text=" ".join(words)))
    return Corpus(records=tuple(records))
