"""Random forest: Gini trees on bootstrap samples, majority-vote output."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..corpus import N_ROLES
from ..seeding import derive_seed
from .base import Hyperparameters, TrainingBatch

LEAF = -1


@dataclass
class Tree:
    """Flat array encoding: feature[i] == -1 marks a leaf."""

    feature: np.ndarray  # (nodes,) int
    threshold: np.ndarray  # (nodes,) float
    left: np.ndarray  # (nodes,) int
    right: np.ndarray  # (nodes,) int
    counts: np.ndarray  # (nodes, C) class counts seen at the node

    def vote(self, X: np.ndarray) -> np.ndarray:
        """Majority class per sample (leaf ties -> lower class index)."""
        n = len(X)
        out = np.zeros(n, dtype=np.int64)
        stack = [(0, np.arange(n))]
        while stack:
            node, idx = stack.pop()
            if len(idx) == 0:
                continue
            if self.feature[node] == LEAF:
                out[idx] = int(self.counts[node].argmax())
                continue
            goes_left = X[idx, self.feature[node]] < self.threshold[node]
            stack.append((self.left[node], idx[goes_left]))
            stack.append((self.right[node], idx[~goes_left]))
        return out


def _best_split(X: np.ndarray, y: np.ndarray, features: np.ndarray):
    """Lowest weighted-Gini (feature, threshold) over candidate features.

    Thresholds are midpoints between consecutive distinct sorted values.
    Returns None when no feature admits a split.
    """
    m = len(y)
    onehot = np.zeros((m, N_ROLES))
    onehot[np.arange(m), y] = 1.0
    total = onehot.sum(axis=0)
    best = None  # (weighted_gini, feature, threshold)
    for f in features:
        v = X[:, f]
        order = np.argsort(v, kind="stable")
        vs = v[order]
        boundaries = np.nonzero(vs[:-1] < vs[1:])[0]
        if len(boundaries) == 0:
            continue
        cum = np.cumsum(onehot[order], axis=0)
        left = cum[boundaries]  # (k, C)
        right = total - left
        n_left = boundaries + 1.0
        n_right = m - n_left
        gini_left = 1.0 - (left * left).sum(axis=1) / (n_left * n_left)
        gini_right = 1.0 - (right * right).sum(axis=1) / (n_right * n_right)
        weighted = (n_left * gini_left + n_right * gini_right) / m
        k = int(weighted.argmin())
        if best is None or weighted[k] < best[0]:
            thr = 0.5 * (vs[boundaries[k]] + vs[boundaries[k] + 1])
            best = (float(weighted[k]), int(f), thr)
    return best


def _grow_tree(X: np.ndarray, y: np.ndarray, rng: np.random.Generator,
               n_split_features: int) -> Tree:
    feature, threshold, left, right, counts = [], [], [], [], []

    def new_node(idx: np.ndarray) -> int:
        node = len(feature)
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        counts.append(np.bincount(y[idx], minlength=N_ROLES).astype(float))
        return node

    root_idx = np.arange(len(y))
    stack = [(new_node(root_idx), root_idx)]
    while stack:
        node, idx = stack.pop()
        if len(idx) < 2 or len(np.unique(y[idx])) == 1:
            continue
        candidates = rng.choice(X.shape[1], size=n_split_features, replace=False)
        split = _best_split(X[idx], y[idx], candidates)
        if split is None:
            continue
        _, f, thr = split
        goes_left = X[idx, f] < thr
        feature[node] = f
        threshold[node] = thr
        left_idx, right_idx = idx[goes_left], idx[~goes_left]
        left[node] = new_node(left_idx)
        right[node] = new_node(right_idx)
        stack.append((left[node], left_idx))
        stack.append((right[node], right_idx))
    return Tree(
        np.asarray(feature, dtype=np.int64),
        np.asarray(threshold, dtype=float),
        np.asarray(left, dtype=np.int64),
        np.asarray(right, dtype=np.int64),
        np.stack(counts),
    )


class RandomForest:
    def __init__(self, trees: list[Tree], seed: int):
        self.trees = trees
        self.seed = seed

    @classmethod
    def fit(cls, batch: TrainingBatch, n_trees: int, seed: int,
            n_jobs: int = 1) -> "RandomForest":
        X = np.asarray(batch.features, dtype=float)
        y = batch.class_indices()
        n, V = X.shape
        n_split_features = max(1, int(round(np.sqrt(V))))

        def build(i: int) -> Tree:
            rng = np.random.default_rng(derive_seed(seed, f"rf-tree-{i}"))
            sample = rng.integers(0, n, size=n)  # bootstrap with replacement
            return _grow_tree(X[sample], y[sample], rng, n_split_features)

        if n_jobs > 1:
            with ThreadPoolExecutor(max_workers=n_jobs) as pool:
                trees = list(pool.map(build, range(n_trees)))
        else:
            trees = [build(i) for i in range(n_trees)]
        return cls(trees, seed)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        votes = np.zeros((len(X), N_ROLES))
        for tree in self.trees:
            votes[np.arange(len(X)), tree.vote(X)] += 1.0
        return votes / len(self.trees)

    def param_count(self) -> int:
        return sum(t.feature.size * 4 + t.counts.size for t in self.trees)

    def state(self) -> tuple[dict, dict[str, np.ndarray]]:
        offsets = np.cumsum([0] + [len(t.feature) for t in self.trees])
        tensors = {
            "tree_offsets": offsets.astype(np.int64),
            "feature": np.concatenate([t.feature for t in self.trees]),
            "threshold": np.concatenate([t.threshold for t in self.trees]),
            "left": np.concatenate([t.left for t in self.trees]),
            "right": np.concatenate([t.right for t in self.trees]),
            "counts": np.concatenate([t.counts for t in self.trees]),
        }
        return {"seed": self.seed}, tensors

    @classmethod
    def from_state(cls, meta: dict, tensors: dict[str, np.ndarray]) -> "RandomForest":
        offsets = tensors["tree_offsets"].astype(np.int64)
        trees = []
        for i in range(len(offsets) - 1):
            lo, hi = offsets[i], offsets[i + 1]
            trees.append(
                Tree(
                    tensors["feature"][lo:hi].astype(np.int64),
                    tensors["threshold"][lo:hi],
                    tensors["left"][lo:hi].astype(np.int64),
                    tensors["right"][lo:hi].astype(np.int64),
                    tensors["counts"][lo:hi],
                )
            )
        return cls(trees, int(meta["seed"]))


def fit_rf(batch: TrainingBatch, hp: Hyperparameters, n_jobs: int = 1) -> RandomForest:
    return RandomForest.fit(batch, hp.trees, hp.seed, n_jobs=n_jobs)
