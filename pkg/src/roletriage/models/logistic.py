"""Multinomial softmax regression trained by mini-batch Adam."""
from __future__ import annotations

import numpy as np

from ..corpus import N_ROLES
from ..errors import Divergence
from .base import Hyperparameters, TrainingBatch
from .losses import mean_cross_entropy, softmax
from .optim import Adam


def lr_loss_and_grads(params: dict[str, np.ndarray], X: np.ndarray, Y: np.ndarray,
                      l2_lambda: float) -> tuple[float, dict[str, np.ndarray]]:
    """Cross-entropy + (lambda/2)||W||^2 with analytic gradients.

    Kept as a standalone function so finite-difference checks can probe the
    exact objective the optimizer sees.
    """
    W, b = params["W"], params["b"]
    n = len(X)
    probs = softmax(X @ W + b)
    # bias counts as part of the penalized weights so the large-lambda limit
    # is exactly the uniform distribution
    penalty = 0.5 * l2_lambda * (float((W * W).sum()) + float((b * b).sum()))
    loss = mean_cross_entropy(Y, probs) + penalty
    dlogits = (probs - Y) / n
    grads = {
        "W": X.T @ dlogits + l2_lambda * W,
        "b": dlogits.sum(axis=0) + l2_lambda * b,
    }
    return loss, grads


class LogisticRegression:
    def __init__(self, W: np.ndarray, b: np.ndarray):
        self.W = W  # (V, C)
        self.b = b  # (C,)

    @classmethod
    def fit(cls, batch: TrainingBatch, hp: Hyperparameters, rng: np.random.Generator) -> "LogisticRegression":
        X = np.asarray(batch.features, dtype=float)
        Y = batch.labels
        n, V = X.shape
        params = {"W": np.zeros((V, N_ROLES)), "b": np.zeros(N_ROLES)}
        opt = Adam(params, hp.learning_rate)
        for epoch in range(hp.epochs):
            order = rng.permutation(n)
            for start in range(0, n, hp.batch_size):
                idx = order[start:start + hp.batch_size]
                loss, grads = lr_loss_and_grads(params, X[idx], Y[idx], hp.l2_lambda)
                if not np.isfinite(loss):
                    raise Divergence("lr", epoch, loss)
                opt.step(params, grads)
        return cls(params["W"], params["b"])

    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(X, dtype=float) @ self.W + self.b

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return softmax(self.decision_scores(X))

    def param_count(self) -> int:
        return self.W.size + self.b.size

    def state(self) -> tuple[dict, dict[str, np.ndarray]]:
        return {}, {"W": self.W, "b": self.b}

    @classmethod
    def from_state(cls, meta: dict, tensors: dict[str, np.ndarray]) -> "LogisticRegression":
        return cls(tensors["W"], tensors["b"])


def fit_lr(batch: TrainingBatch, hp: Hyperparameters,
           rng: np.random.Generator | None = None) -> LogisticRegression:
    rng = rng if rng is not None else np.random.default_rng(hp.seed)
    return LogisticRegression.fit(batch, hp, rng)
