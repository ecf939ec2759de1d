"""Top-level training entry point: raw corpus in, TrainedModel out."""
from __future__ import annotations

from pathlib import Path

import numpy as np

from ..corpus import Corpus, project_role_set
from ..seeding import derive_seed
from ..textprep import EmbeddingMatrix, load_embeddings, one_hot_matrix
from .base import (
    Featurizer,
    Hyperparameters,
    MODEL_KINDS,
    TrainedModel,
    TrainingBatch,
    feature_kind_for,
)
from .cnn import fit_cnn1d
from .cosine import fit_cosine
from .forest import fit_rf
from .logistic import fit_lr
from .mnb import fit_mnb
from .svc import fit_svc
from .lstm import fit_lstm


def train_on_titles(kind: str, titles: list[str], roles: list,
                    hp: Hyperparameters | None = None,
                    embeddings_path: str | Path | None = None,
                    rf_jobs: int = 1) -> TrainedModel:
    """Fit one classifier family on raw titles + generalized roles."""
    if kind not in MODEL_KINDS:
        raise ValueError(f"unknown model kind {kind!r} (expected one of {MODEL_KINDS})")
    hp = hp or Hyperparameters()
    featurizer = Featurizer.fit(
        feature_kind_for(kind, hp), titles, hp.vocab_max_size, max_len=hp.max_len
    )
    batch = TrainingBatch(featurizer.transform(titles), one_hot_matrix(roles))

    pretrained: EmbeddingMatrix | None = None
    if embeddings_path is not None and kind in ("lstm", "cnn"):
        pretrained = load_embeddings(embeddings_path, featurizer.vocab)

    history = None
    if kind == "mnb":
        estimator = fit_mnb(batch, hp.laplace_alpha)
    elif kind == "lr":
        estimator = fit_lr(batch, hp, np.random.default_rng(derive_seed(hp.seed, "lr")))
    elif kind == "svc":
        estimator = fit_svc(batch, hp, np.random.default_rng(derive_seed(hp.seed, "svc")))
    elif kind == "cs":
        estimator = fit_cosine(batch)
    elif kind == "rf":
        estimator = fit_rf(batch, hp, n_jobs=rf_jobs)
    elif kind == "lstm":
        estimator, history = fit_lstm(batch, hp, featurizer.vocab.size, pretrained)
    else:
        estimator, history = fit_cnn1d(batch, hp, featurizer.vocab.size, pretrained)

    return TrainedModel(
        kind=kind,
        featurizer=featurizer,
        estimator=estimator,
        hyperparams=hp,
        pretrained=pretrained is not None,
        history=history,
    )


def train_model(kind: str, corpus: Corpus, hp: Hyperparameters | None = None,
                embeddings_path: str | Path | None = None,
                rf_jobs: int = 1) -> TrainedModel:
    """As train_on_titles, additionally capturing each project's role set so
    downstream recommendation can apply the in-project fallback."""
    model = train_on_titles(
        kind, corpus.titles(), corpus.roles(), hp, embeddings_path, rf_jobs
    )
    model.project_roles = {
        pid: tuple(sorted(r.label for r in project_role_set(corpus, pid)))
        for pid in corpus.project_index
    }
    return model
