import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for the oracles module

from roletriage.corpus import Corpus
from roletriage.datagen import load_fixture_corpus, make_separable_corpus
from roletriage.models import Hyperparameters, train_on_titles

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURE_DIR = REPO_ROOT / "data" / "fixture"


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURE_DIR


@pytest.fixture(scope="session")
def fixture_corpus() -> Corpus:
    return load_fixture_corpus(FIXTURE_DIR)


@pytest.fixture(scope="session")
def separable():
    """(titles, roles): 7 classes x 50 titles, keyword-separable."""
    return make_separable_corpus(50, seed=42)


@pytest.fixture(scope="session")
def quick_hp() -> Hyperparameters:
    """Small budgets for tests that only need a working model."""
    return Hyperparameters(epochs=8, trees=15, hidden_units=24, embedding_dim=16)


@pytest.fixture(scope="session")
def quick_models(separable, quick_hp):
    """One small trained model per kind, shared across test modules."""
    titles, roles = separable
    titles, roles = titles[:140], roles[:140]
    return {
        kind: train_on_titles(kind, titles, roles, quick_hp)
        for kind in ("mnb", "lr", "svc", "cs", "rf", "lstm", "cnn")
    }
