import numpy as np
import pytest

from oracles import finite_difference_grads, gradient_relative_error
from roletriage.errors import SingleClassBatch
from roletriage.models import (
    Hyperparameters,
    TrainingBatch,
    fit_lr,
    fit_svc,
    lr_loss_and_grads,
)


def separable_batch(n_per_class=12, seed=0):
    """Two clusters along different axes of a 6-dim space."""
    rng = np.random.default_rng(seed)
    a = np.abs(rng.normal(1.0, 0.2, size=(n_per_class, 6))) * [1, 1, 0, 0, 0, 0]
    b = np.abs(rng.normal(1.0, 0.2, size=(n_per_class, 6))) * [0, 0, 1, 1, 0, 0]
    X = np.vstack([a, b])
    Y = np.zeros((2 * n_per_class, 7))
    Y[:n_per_class, 0] = 1.0
    Y[n_per_class:, 1] = 1.0
    return TrainingBatch(X, Y)


class TestLogisticRegression:
    def test_separable_set_reaches_full_training_accuracy(self):
        batch = separable_batch()
        hp = Hyperparameters(epochs=200, learning_rate=0.05)
        model = fit_lr(batch, hp)
        preds = model.predict_proba(batch.features).argmax(axis=1)
        assert (preds == batch.class_indices()).all()

    def test_huge_l2_pushes_outputs_toward_uniform(self):
        batch = separable_batch()
        hp = Hyperparameters(epochs=100, l2_lambda=1e4)
        model = fit_lr(batch, hp)
        probs = model.predict_proba(batch.features)
        np.testing.assert_allclose(probs, 1 / 7, atol=0.02)
        assert np.abs(model.W).max() < 1e-2

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(5)
        X = rng.normal(0, 1, size=(5, 4))
        Y = np.zeros((5, 7))
        Y[np.arange(5), rng.integers(0, 7, 5)] = 1.0
        params = {"W": rng.normal(0, 0.5, (4, 7)), "b": rng.normal(0, 0.5, 7)}
        _, analytic = lr_loss_and_grads(params, X, Y, l2_lambda=0.01)
        numeric = finite_difference_grads(
            lambda: lr_loss_and_grads(params, X, Y, l2_lambda=0.01)[0], params
        )
        assert gradient_relative_error(analytic, numeric) <= 1e-4

    def test_deterministic_for_fixed_seed(self):
        batch = separable_batch()
        hp = Hyperparameters(epochs=20)
        a, b = fit_lr(batch, hp), fit_lr(batch, hp)
        np.testing.assert_array_equal(a.W, b.W)


class TestLinearSVC:
    def test_separable_set_reaches_full_training_accuracy(self):
        batch = separable_batch()
        model = fit_svc(batch, Hyperparameters())
        preds = model.decision_scores(batch.features).argmax(axis=1)
        assert (preds == batch.class_indices()).all()

    def test_argmax_over_margins_is_the_decision(self):
        from roletriage.models import LinearSVC

        # identity weights make the margins equal the input feature vector
        model = LinearSVC(np.eye(7), np.zeros(7))
        feature = np.array([[2.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0]])
        np.testing.assert_allclose(model.decision_scores(feature), feature)
        assert int(model.predict_proba(feature).argmax()) == 0

    def test_positive_scaling_leaves_argmax_unchanged(self):
        batch = separable_batch(seed=3)
        model = fit_svc(batch, Hyperparameters())
        scores = model.decision_scores(batch.features)
        scaled = 7.3 * scores
        assert (scores.argmax(axis=1) == scaled.argmax(axis=1)).all()
        # softmax confidences preserve the argmax too
        probs = model.predict_proba(batch.features)
        assert (probs.argmax(axis=1) == scores.argmax(axis=1)).all()

    def test_single_class_batch_rejected(self):
        X = np.ones((4, 3))
        Y = np.zeros((4, 7))
        Y[:, 2] = 1.0
        with pytest.raises(SingleClassBatch):
            fit_svc(TrainingBatch(X, Y), Hyperparameters())

    def test_probabilities_sum_to_one(self):
        batch = separable_batch()
        model = fit_svc(batch, Hyperparameters())
        probs = model.predict_proba(batch.features)
        np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-6)
