import math

import numpy as np
import pytest

from roletriage.errors import LengthMismatch
from roletriage.models import categorical_cross_entropy, softmax


class TestCategoricalCrossEntropy:
    def test_perfect_prediction_is_zero(self):
        y = np.array([1, 0, 0, 0, 0, 0, 0], dtype=float)
        assert categorical_cross_entropy(y, y) == pytest.approx(0.0)

    def test_uniform_prediction_is_ln7(self):
        y = np.zeros(7)
        y[0] = 1.0
        y_hat = np.full(7, 1 / 7)
        assert categorical_cross_entropy(y, y_hat) == pytest.approx(math.log(7), abs=1e-12)

    def test_half_mass_is_ln2(self):
        y = np.array([0, 1, 0, 0, 0, 0, 0], dtype=float)
        y_hat = np.array([0.5, 0.5, 0, 0, 0, 0, 0])
        assert categorical_cross_entropy(y, y_hat) == pytest.approx(math.log(2), abs=1e-12)

    def test_non_negative_even_at_zero_probability(self):
        y = np.array([0, 1.0])
        y_hat = np.array([1.0, 0.0])  # clipped to 1e-12 before the log
        loss = categorical_cross_entropy(y, y_hat)
        assert loss == pytest.approx(-math.log(1e-12))

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            categorical_cross_entropy(np.zeros(7), np.zeros(6))


class TestSoftmax:
    def test_zeros_give_uniform(self):
        np.testing.assert_allclose(softmax(np.zeros(7)), np.full(7, 1 / 7))

    def test_large_score_is_stable(self):
        scores = np.zeros(7)
        scores[0] = 1000.0
        out = softmax(scores)
        assert np.isfinite(out).all()
        assert out[0] == pytest.approx(1.0)

    def test_two_class_hand_value(self):
        out = softmax(np.array([math.log(2), 0.0]))
        np.testing.assert_allclose(out, [2 / 3, 1 / 3], atol=1e-12)

    def test_rows_sum_to_one(self):
        rng = np.random.default_rng(3)
        scores = rng.normal(0, 5, size=(20, 7))
        out = softmax(scores)
        np.testing.assert_allclose(out.sum(axis=1), 1.0, atol=1e-12)
        assert (out >= 0).all()
