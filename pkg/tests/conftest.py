"""Shared fixtures: a small separable synthetic corpus and models trained on it.

Training is the expensive part, so the corpus, its feature space, and one
model per classifier kind are built once per session and shared read-only.
"""
import sys

import pytest
from hypothesis import HealthCheck, settings

from ilid.classifiers import KINDS, train
from ilid.classifiers.base import TrainConfig
from ilid.corpus import SplitSpec, split_corpus
from ilid.features import fit_vectorizer, transform
from ilid.pipeline import build_dataset
from ilid.synth import gen_synthetic

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def small_corpus():
    return gen_synthetic(n_langs=5, sents_per_lang=30, seed=123)


@pytest.fixture(scope="session")
def small_split(small_corpus):
    spec = SplitSpec(ratios=(0.7, 0.15, 0.15), seed=9)
    return split_corpus(small_corpus, spec)


@pytest.fixture(scope="session")
def char_vectorizer(small_split):
    train_part, _, _ = small_split
    return fit_vectorizer(train_part, mode="char", ngram_range=(2, 4))


@pytest.fixture(scope="session")
def train_dataset(small_split, char_vectorizer):
    train_part, _, _ = small_split
    return build_dataset(train_part, char_vectorizer)


@pytest.fixture(scope="session")
def test_part(small_split):
    return small_split[2]


@pytest.fixture(scope="session")
def test_vectors(test_part, char_vectorizer):
    return [transform(char_vectorizer, r.text) for r in test_part.records]


@pytest.fixture(scope="session")
def trained_models(train_dataset):
    cfg = TrainConfig(seed=7)
    return {kind: train(kind, train_dataset, cfg) for kind in KINDS}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one line per acceptance criterion after the test summary."""
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None) if module else None
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, detail in sorted(results):
        terminalreporter.write_line(f"criterion {number:>2}: {status:<11} {detail}")
