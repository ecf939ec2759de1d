"""Shared gradient-descent training loop for the sequence models.

One epoch = shuffled mini-batches through Adam; after each epoch the full
training set is scored in inference mode (no dropout) and appended to the
history.  Early stopping halts when training accuracy has not improved for
the configured patience.
"""
from __future__ import annotations

import numpy as np

from ..errors import Divergence
from .base import Hyperparameters
from .losses import mean_cross_entropy
from .optim import Adam


def train_network(net, X: np.ndarray, Y: np.ndarray, hp: Hyperparameters,
                  rng: np.random.Generator, kind: str) -> list[tuple[float, float]]:
    n = len(X)
    opt = Adam(net.params, hp.learning_rate)
    history: list[tuple[float, float]] = []
    best_acc = -np.inf
    epochs_since_best = 0
    for epoch in range(hp.epochs):
        order = rng.permutation(n)
        for start in range(0, n, hp.batch_size):
            idx = order[start:start + hp.batch_size]
            loss, grads = net.loss_and_grads(X[idx], Y[idx], rng=rng, train=True)
            if not np.isfinite(loss):
                raise Divergence(kind, epoch, loss)
            net.postprocess_grads(grads)
            opt.step(net.params, grads)
        probs = net.predict_proba(X)
        epoch_loss = mean_cross_entropy(Y, probs)
        epoch_acc = float((probs.argmax(axis=1) == Y.argmax(axis=1)).mean())
        history.append((epoch_loss, epoch_acc))
        if epoch_acc > best_acc:
            best_acc = epoch_acc
            epochs_since_best = 0
        else:
            epochs_since_best += 1
            if epochs_since_best >= hp.early_stop_patience:
                break
    return history


def glorot_uniform(rng: np.random.Generator, fan_in: int, fan_out: int,
                   shape: tuple[int, ...]) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)
