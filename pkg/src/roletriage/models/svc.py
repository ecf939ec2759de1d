"""One-vs-rest linear SVC via sub-gradient descent on regularized hinge loss.

Objective per class (Pegasos scaling): (lambda/2)||w||^2 + mean hinge, with
lambda = 1/(C*n).  The step size 1/(lambda*t) gives the classic convergence
behaviour of the sub-gradient method.  Decision margins are mapped through a
softmax for the confidence vector; only the argmax is claimed meaningful.
"""
from __future__ import annotations

import numpy as np

from ..corpus import N_ROLES
from ..errors import SingleClassBatch
from .base import Hyperparameters, TrainingBatch
from .losses import softmax


class LinearSVC:
    def __init__(self, W: np.ndarray, b: np.ndarray):
        self.W = W  # (V, C)
        self.b = b  # (C,)

    @classmethod
    def fit(cls, batch: TrainingBatch, hp: Hyperparameters, rng: np.random.Generator) -> "LinearSVC":
        X = np.asarray(batch.features, dtype=float)
        Y_pm = 2.0 * batch.labels - 1.0  # one-vs-rest targets in {-1, +1}
        n, V = X.shape
        if len(np.unique(batch.class_indices())) < 2:
            raise SingleClassBatch("linear SVC needs at least two classes present")
        lam = 1.0 / (hp.svc_c * n)
        W = np.zeros((V, N_ROLES))
        b = np.zeros(N_ROLES)
        epochs = max(hp.epochs, 300)  # the 1/(lambda*t) schedule needs the steps
        t = 0
        for _ in range(epochs):
            order = rng.permutation(n)
            for start in range(0, n, hp.batch_size):
                idx = order[start:start + hp.batch_size]
                t += 1
                eta = 1.0 / (lam * t)
                Xb, Yb = X[idx], Y_pm[idx]
                margins = Yb * (Xb @ W + b)
                active = (margins < 1.0).astype(float)
                dW = lam * W - (Xb.T @ (Yb * active)) / len(idx)
                db = -(Yb * active).sum(axis=0) / len(idx)
                W -= eta * dW
                b -= eta * db
        return cls(W, b)

    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(X, dtype=float) @ self.W + self.b

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return softmax(self.decision_scores(X))

    def param_count(self) -> int:
        return self.W.size + self.b.size

    def state(self) -> tuple[dict, dict[str, np.ndarray]]:
        return {}, {"W": self.W, "b": self.b}

    @classmethod
    def from_state(cls, meta: dict, tensors: dict[str, np.ndarray]) -> "LinearSVC":
        return cls(tensors["W"], tensors["b"])


def fit_svc(batch: TrainingBatch, hp: Hyperparameters,
            rng: np.random.Generator | None = None) -> LinearSVC:
    rng = rng if rng is not None else np.random.default_rng(hp.seed)
    return LinearSVC.fit(batch, hp, rng)
