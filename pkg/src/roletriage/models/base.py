"""Shared model contract: hyperparameters, featurization, trained wrapper.

Every classifier family sits behind the same surface: fit on a
TrainingBatch (features + one-hot labels), predict a probability vector
over the 7 roles.  The featurizer that produced the training features
travels with the trained model so inference-time preprocessing can never
drift from training-time preprocessing.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np

from ..corpus import N_ROLES, RoleLabel
from ..errors import EmptyBatch, FeatureKindMismatch, LengthMismatch
from ..textprep import (
    IdfTable,
    Vocabulary,
    build_vocabulary,
    count_matrix,
    default_max_len,
    encode_sequence,
    tfidf_fit,
    tfidf_matrix,
    tokenize,
)

MODEL_KINDS = ("mnb", "lr", "svc", "cs", "rf", "lstm", "cnn")
NEURAL_KINDS = ("lstm", "cnn")

ROLE_ORDER = tuple(RoleLabel.from_index(i).label for i in range(N_ROLES))


@dataclass(frozen=True)
class Hyperparameters:
    embedding_dim: int = 100
    hidden_units: int = 100
    dropout_rate: float = 0.2
    epochs: int = 30
    batch_size: int = 32
    learning_rate: float = 1e-3
    early_stop_patience: int = 3
    seed: int = 42
    l2_lambda: float = 1e-4
    trees: int = 100
    laplace_alpha: float = 1.0
    svc_c: float = 1.0
    cnn_filters: int = 64
    cnn_width: int = 3
    vocab_max_size: int = 5000
    max_len: int | None = None
    mnb_use_tfidf: bool = False

    def __post_init__(self):
        positive = (
            "embedding_dim", "hidden_units", "epochs", "batch_size",
            "learning_rate", "early_stop_patience", "l2_lambda", "trees",
            "laplace_alpha", "svc_c", "cnn_filters", "cnn_width",
            "vocab_max_size",
        )
        for name in positive:
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError("dropout_rate must lie in [0, 1)")

    def override(self, **kwargs) -> "Hyperparameters":
        return replace(self, **kwargs)


@dataclass
class TrainingBatch:
    """Features plus aligned one-hot labels."""

    features: np.ndarray  # (n, d) bag features or (n, T) integer sequences
    labels: np.ndarray  # (n, N_ROLES) one-hot

    def __post_init__(self):
        self.features = np.asarray(self.features)
        self.labels = np.asarray(self.labels, dtype=float)
        if len(self.features) != len(self.labels):
            raise LengthMismatch(
                f"{len(self.features)} feature rows vs {len(self.labels)} label rows"
            )
        if len(self.features) == 0:
            raise EmptyBatch("training batch has no samples")

    def __len__(self) -> int:
        return len(self.features)

    def class_indices(self) -> np.ndarray:
        return self.labels.argmax(axis=1)


# feature families per classifier kind: integer sequences for the neural
# models, TF-IDF bags for the linear/centroid/forest models, raw term counts
# for naive Bayes (switchable to TF-IDF).
FEATURE_SEQUENCE = "sequence"
FEATURE_TFIDF = "tfidf"
FEATURE_COUNTS = "counts"


def feature_kind_for(model_kind: str, hp: Hyperparameters) -> str:
    if model_kind in NEURAL_KINDS:
        return FEATURE_SEQUENCE
    if model_kind == "mnb" and not hp.mnb_use_tfidf:
        return FEATURE_COUNTS
    return FEATURE_TFIDF


@dataclass(frozen=True)
class Featurizer:
    """Frozen preprocessing state: raw title -> model feature."""

    kind: str
    vocab: Vocabulary
    idf: IdfTable | None = None
    max_len: int | None = None

    @classmethod
    def fit(cls, kind: str, raw_titles: list[str],
            max_vocab: int | None = 5000, max_len: int | None = None) -> "Featurizer":
        texts = [" ".join(tokenize(t)) for t in raw_titles]
        vocab = build_vocabulary(texts, max_vocab)
        if kind == FEATURE_SEQUENCE:
            return cls(kind, vocab, max_len=max_len or default_max_len(texts))
        if kind == FEATURE_TFIDF:
            return cls(kind, vocab, idf=tfidf_fit(texts, vocab))
        if kind == FEATURE_COUNTS:
            return cls(kind, vocab)
        raise ValueError(f"unknown feature kind {kind!r}")

    @property
    def feature_dim(self) -> int:
        return self.max_len if self.kind == FEATURE_SEQUENCE else self.vocab.size

    def transform(self, raw_titles: list[str]) -> np.ndarray:
        texts = [" ".join(tokenize(t)) for t in raw_titles]
        if self.kind == FEATURE_SEQUENCE:
            return np.stack([encode_sequence(self.vocab, t, self.max_len) for t in texts])
        if self.kind == FEATURE_TFIDF:
            return tfidf_matrix(self.idf, texts)
        return count_matrix(self.vocab, texts)

    def transform_one(self, raw_title: str) -> np.ndarray:
        return self.transform([raw_title])[0]


@dataclass
class TrainedModel:
    """Any of the seven families behind one predict contract."""

    kind: str
    featurizer: Featurizer
    estimator: Any
    hyperparams: Hyperparameters
    pretrained: bool = False
    history: list[tuple[float, float]] | None = None  # per-epoch (loss, accuracy)
    role_order: tuple[str, ...] = ROLE_ORDER
    project_roles: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def predict_proba_batch(self, features: np.ndarray) -> np.ndarray:
        features = np.asarray(features)
        if features.ndim != 2:
            raise FeatureKindMismatch(f"expected a 2-D feature batch, got ndim={features.ndim}")
        if self.featurizer.kind == FEATURE_SEQUENCE:
            if not np.issubdtype(features.dtype, np.integer):
                raise FeatureKindMismatch(
                    f"{self.kind} expects integer token sequences, got dtype {features.dtype}"
                )
            if features.shape[1] != self.featurizer.max_len:
                raise FeatureKindMismatch(
                    f"sequence length {features.shape[1]} != model max_len {self.featurizer.max_len}"
                )
        else:
            if np.issubdtype(features.dtype, np.integer):
                raise FeatureKindMismatch(
                    f"{self.kind} expects real-valued bag features, got an integer array"
                )
            if features.shape[1] != self.featurizer.vocab.size:
                raise FeatureKindMismatch(
                    f"feature width {features.shape[1]} != vocabulary size {self.featurizer.vocab.size}"
                )
        return self.estimator.predict_proba(features)

    def predict_proba_titles(self, raw_titles: list[str]) -> np.ndarray:
        return self.predict_proba_batch(self.featurizer.transform(raw_titles))

    def param_count(self) -> int:
        return self.estimator.param_count()


def predict_proba(model: TrainedModel, feature: np.ndarray) -> np.ndarray:
    """Probability vector over the 7 roles for a single feature."""
    feature = np.asarray(feature)
    if feature.ndim != 1:
        raise FeatureKindMismatch(f"expected a single 1-D feature, got ndim={feature.ndim}")
    return model.predict_proba_batch(feature[None, :])[0]
