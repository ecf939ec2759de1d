"""Nearest-centroid classifier on cosine similarity of TF-IDF vectors."""
from __future__ import annotations

import numpy as np

from ..corpus import N_ROLES
from .base import TrainingBatch


def _safe_unit(rows: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(rows, axis=-1, keepdims=True)
    return np.divide(rows, norms, out=np.zeros_like(rows), where=norms > 0)


class CosineCentroid:
    """Per-class centroid of l2-normalized vectors; scores are cosines.

    Confidence: cosines shifted to non-negative and normalized; when every
    score is zero (query orthogonal to all centroids) the output is uniform.
    Argmax ties resolve to the lower role index.
    """

    def __init__(self, centroids: np.ndarray):
        self.centroids = centroids  # (C, V); zero rows for absent classes

    @classmethod
    def fit(cls, batch: TrainingBatch) -> "CosineCentroid":
        X = _safe_unit(np.asarray(batch.features, dtype=float))
        Y = batch.labels
        counts = Y.sum(axis=0)  # (C,)
        sums = Y.T @ X  # (C, V)
        centroids = np.divide(
            sums, counts[:, None], out=np.zeros_like(sums), where=counts[:, None] > 0
        )
        return cls(centroids)

    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        q = _safe_unit(np.asarray(X, dtype=float))
        c = _safe_unit(self.centroids)
        return q @ c.T

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        scores = self.decision_scores(X)
        shifted = scores - np.minimum(scores.min(axis=1, keepdims=True), 0.0)
        totals = shifted.sum(axis=1, keepdims=True)
        uniform = np.full_like(shifted, 1.0 / N_ROLES)
        return np.where(totals > 0, np.divide(shifted, totals, where=totals > 0), uniform)

    def param_count(self) -> int:
        return self.centroids.size

    def state(self) -> tuple[dict, dict[str, np.ndarray]]:
        return {}, {"centroids": self.centroids}

    @classmethod
    def from_state(cls, meta: dict, tensors: dict[str, np.ndarray]) -> "CosineCentroid":
        return cls(tensors["centroids"])


def fit_cosine(batch: TrainingBatch) -> CosineCentroid:
    return CosineCentroid.fit(batch)
