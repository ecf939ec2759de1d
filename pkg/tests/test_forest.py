import numpy as np
import pytest

from roletriage.models import Hyperparameters, TrainingBatch, fit_rf
from roletriage.models.forest import RandomForest


def onehot_labels(indices):
    Y = np.zeros((len(indices), 7))
    Y[np.arange(len(indices)), indices] = 1.0
    return Y


def clustered_batch(seed=0, n_per_class=15, n_classes=3, dim=6):
    rng = np.random.default_rng(seed)
    X, y = [], []
    for c in range(n_classes):
        center = np.zeros(dim)
        center[c] = 2.0
        X.append(center + rng.normal(0, 0.3, size=(n_per_class, dim)))
        y.extend([c] * n_per_class)
    return TrainingBatch(np.vstack(X), onehot_labels(y))


class TestRandomForest:
    def test_single_class_training_set(self):
        X = np.random.default_rng(1).normal(size=(8, 3))
        batch = TrainingBatch(X, onehot_labels([5] * 8))
        model = fit_rf(batch, Hyperparameters(trees=5))
        probs = model.predict_proba(X)
        np.testing.assert_allclose(probs[:, 5], 1.0)

    def test_one_tree_memorizes_distinct_samples(self):
        X = np.array([[0.0, 1.0], [1.0, 0.0]])
        batch = TrainingBatch(X, onehot_labels([1, 3]))
        # single tree, but the bootstrap may omit a sample: check several seeds
        # still classify the bootstrap's own content perfectly
        model = RandomForest.fit(batch, n_trees=1, seed=4)
        tree = model.trees[0]
        # the tree fits its bootstrap sample exactly: impurity only stops
        # splitting when a node is pure
        assert (tree.counts[tree.feature == -1].max(axis=1)
                == tree.counts[tree.feature == -1].sum(axis=1)).all()

    def test_fixed_seed_reproduces_forest_and_predictions(self):
        batch = clustered_batch()
        a = fit_rf(batch, Hyperparameters(trees=10, seed=9))
        b = fit_rf(batch, Hyperparameters(trees=10, seed=9))
        for ta, tb in zip(a.trees, b.trees):
            np.testing.assert_array_equal(ta.feature, tb.feature)
            np.testing.assert_array_equal(ta.threshold, tb.threshold)
        np.testing.assert_array_equal(
            a.predict_proba(batch.features), b.predict_proba(batch.features)
        )

    def test_parallel_training_matches_serial(self):
        batch = clustered_batch(seed=2)
        serial = fit_rf(batch, Hyperparameters(trees=8, seed=3), n_jobs=1)
        parallel = fit_rf(batch, Hyperparameters(trees=8, seed=3), n_jobs=4)
        for ta, tb in zip(serial.trees, parallel.trees):
            np.testing.assert_array_equal(ta.feature, tb.feature)
            np.testing.assert_array_equal(ta.threshold, tb.threshold)
            np.testing.assert_array_equal(ta.counts, tb.counts)

    def test_learns_clustered_data(self):
        batch = clustered_batch(seed=5)
        model = fit_rf(batch, Hyperparameters(trees=30, seed=1))
        preds = model.predict_proba(batch.features).argmax(axis=1)
        assert (preds == batch.class_indices()).mean() >= 0.95

    def test_votes_are_normalized(self):
        batch = clustered_batch()
        model = fit_rf(batch, Hyperparameters(trees=7, seed=0))
        probs = model.predict_proba(batch.features)
        np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-12)
        assert ((probs * 7) % 1 < 1e-9).all()  # vote counts / tree count
