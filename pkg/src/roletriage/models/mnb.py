"""Multinomial naive Bayes over term counts (or TF-IDF weights)."""
from __future__ import annotations

import numpy as np

from ..corpus import N_ROLES
from .base import TrainingBatch


class MultinomialNB:
    """Class priors from label counts, per-class token likelihoods with
    Laplace smoothing; posterior proportional to prior * prod p(t|c)^count.

    Classes absent from training keep prior 0 and never win.  Fitting uses
    only sums over the batch, so it is invariant to sample order.
    """

    def __init__(self, log_prior: np.ndarray, log_likelihood: np.ndarray, alpha: float):
        self.log_prior = log_prior  # (C,), -inf for absent classes
        self.log_likelihood = log_likelihood  # (C, V)
        self.alpha = alpha

    @classmethod
    def fit(cls, batch: TrainingBatch, alpha: float) -> "MultinomialNB":
        X = np.asarray(batch.features, dtype=float)
        if (X < 0).any():
            raise ValueError("naive Bayes requires non-negative feature values")
        Y = batch.labels  # (n, C) one-hot
        n, V = X.shape
        class_counts = Y.sum(axis=0)  # (C,)
        with np.errstate(divide="ignore"):
            log_prior = np.log(class_counts / n)
        token_totals = Y.T @ X  # (C, V) summed counts per class
        smoothed = token_totals + alpha
        log_likelihood = np.log(smoothed / smoothed.sum(axis=1, keepdims=True))
        return cls(log_prior, log_likelihood, alpha)

    def joint_log_likelihood(self, X: np.ndarray) -> np.ndarray:
        return X @ self.log_likelihood.T + self.log_prior

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        jll = self.joint_log_likelihood(np.asarray(X, dtype=float))
        # exp-normalize; -inf rows (absent classes) become exactly 0
        shifted = jll - jll.max(axis=1, keepdims=True)
        p = np.exp(shifted)
        return p / p.sum(axis=1, keepdims=True)

    def param_count(self) -> int:
        return self.log_prior.size + self.log_likelihood.size

    def state(self) -> tuple[dict, dict[str, np.ndarray]]:
        meta = {"alpha": self.alpha}
        # -inf does not survive JSON; priors ship as a tensor
        tensors = {
            "log_prior": self.log_prior,
            "log_likelihood": self.log_likelihood,
        }
        return meta, tensors

    @classmethod
    def from_state(cls, meta: dict, tensors: dict[str, np.ndarray]) -> "MultinomialNB":
        return cls(tensors["log_prior"], tensors["log_likelihood"], meta["alpha"])


def fit_mnb(batch: TrainingBatch, alpha: float = 1.0) -> MultinomialNB:
    return MultinomialNB.fit(batch, alpha)
