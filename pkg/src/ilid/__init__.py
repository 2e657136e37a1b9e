"""Sentence-level language identification for English plus the 22 scheduled
Indian languages, across 25 script-aware labels.

Subpackages and modules:

* :mod:`ilid.textproc` — Unicode cleaning, sentence splitting, tokenization,
  script detection.
* :mod:`ilid.corpus` — labeled-corpus I/O, filtering, splitting, statistics.
* :mod:`ilid.harvest` — offline HTML block extraction and fetch throttling.
* :mod:`ilid.features` — TF-IDF word/char/combined vectorizers and hashed
  subword features.
* :mod:`ilid.classifiers` — nine from-scratch classifiers over sparse
  vectors.
* :mod:`ilid.ensemble` — hard/soft voting over trained members.
* :mod:`ilid.metrics` — confusion matrices and macro precision/recall/F1.
* :mod:`ilid.pipeline` — text-level vectorizer/model pairing.
* :mod:`ilid.synth` — deterministic synthetic corpus generation.
* :mod:`ilid.cli` — the ``ilid`` command-line entry point.
"""
from .errors import (
    CapabilityError,
    LidError,
    ParseError,
    TrainingError,
    ValidationError,
)

__version__ = "0.1.0"

__all__ = [
    "CapabilityError",
    "LidError",
    "ParseError",
    "TrainingError",
    "ValidationError",
    "__version__",
]
