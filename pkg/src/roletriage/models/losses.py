"""Objective plumbing shared by every classifier family."""
from __future__ import annotations

import numpy as np

from ..errors import LengthMismatch

PROB_CLIP = 1e-12


def softmax(scores: np.ndarray) -> np.ndarray:
    """Exp-normalize along the last axis, max-subtracted for stability."""
    scores = np.asarray(scores, dtype=float)
    shifted = scores - scores.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def categorical_cross_entropy(y_true: np.ndarray, y_hat: np.ndarray) -> float:
    """-sum_c y_c * log(y_hat_c), with y_hat clipped to [1e-12, 1]."""
    y_true = np.asarray(y_true, dtype=float)
    y_hat = np.asarray(y_hat, dtype=float)
    if y_true.shape != y_hat.shape:
        raise LengthMismatch(
            f"label shape {y_true.shape} != prediction shape {y_hat.shape}"
        )
    clipped = np.clip(y_hat, PROB_CLIP, 1.0)
    return float(-(y_true * np.log(clipped)).sum())


def mean_cross_entropy(y_true: np.ndarray, y_hat: np.ndarray) -> float:
    """Batch mean of the categorical cross-entropy (rows are samples)."""
    y_true = np.asarray(y_true, dtype=float)
    y_hat = np.asarray(y_hat, dtype=float)
    if y_true.shape != y_hat.shape:
        raise LengthMismatch(
            f"label shape {y_true.shape} != prediction shape {y_hat.shape}"
        )
    clipped = np.clip(y_hat, PROB_CLIP, 1.0)
    return float(-(y_true * np.log(clipped)).sum(axis=-1).mean())
