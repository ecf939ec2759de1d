import numpy as np
import pytest

from oracles import bayes_posterior
from roletriage.errors import EmptyBatch
from roletriage.models import TrainingBatch, fit_mnb
from roletriage.textprep import Vocabulary, count_matrix


def make_batch(docs, labels, vocab_tokens):
    vocab = Vocabulary({t: i for i, t in enumerate(vocab_tokens, start=1)})
    X = count_matrix(vocab, [" ".join(d) for d in docs])
    Y = np.zeros((len(docs), 7))
    Y[np.arange(len(docs)), labels] = 1.0
    return TrainingBatch(X, Y), vocab


TOY_DOCS = [["buy", "pizza"], ["eat", "pizza"], ["fix", "bug"], ["fix", "login"]]
TOY_LABELS = [0, 0, 1, 1]
TOY_VOCAB = ["buy", "pizza", "eat", "fix", "bug", "login"]


class TestBayesOracleEquivalence:
    def test_two_class_toy_matches_oracle(self):
        batch, vocab = make_batch(TOY_DOCS, TOY_LABELS, TOY_VOCAB)
        model = fit_mnb(batch, alpha=1.0)
        query = ["fix", "pizza"]
        expected = bayes_posterior(TOY_DOCS, TOY_LABELS, query, 1.0, 7, TOY_VOCAB)
        got = model.predict_proba(count_matrix(vocab, ["fix pizza"]))[0]
        np.testing.assert_allclose(got, expected, atol=1e-9)

    def test_training_document_gets_its_own_label(self):
        batch, vocab = make_batch(TOY_DOCS, TOY_LABELS, TOY_VOCAB)
        model = fit_mnb(batch, alpha=1.0)
        probs = model.predict_proba(batch.features)
        assert list(probs.argmax(axis=1)) == TOY_LABELS

    def test_repeated_token_counts_matter(self):
        batch, vocab = make_batch(TOY_DOCS, TOY_LABELS, TOY_VOCAB)
        model = fit_mnb(batch, alpha=0.5)
        query = ["pizza", "pizza", "fix"]
        expected = bayes_posterior(TOY_DOCS, TOY_LABELS, query, 0.5, 7, TOY_VOCAB)
        got = model.predict_proba(count_matrix(vocab, ["pizza pizza fix"]))[0]
        np.testing.assert_allclose(got, expected, atol=1e-9)


class TestMnbContracts:
    def test_single_class_always_wins(self):
        batch, vocab = make_batch([["a"], ["b"]], [2, 2], ["a", "b"])
        model = fit_mnb(batch, alpha=1.0)
        probs = model.predict_proba(count_matrix(vocab, ["a", "b", "a b"]))
        np.testing.assert_allclose(probs[:, 2], 1.0)

    def test_smoothing_gives_unseen_tokens_nonzero_likelihood(self):
        batch, _ = make_batch(TOY_DOCS, TOY_LABELS, TOY_VOCAB)
        model = fit_mnb(batch, alpha=1.0)
        assert np.isfinite(model.log_likelihood).all()

    def test_training_order_invariant(self):
        batch, _ = make_batch(TOY_DOCS, TOY_LABELS, TOY_VOCAB)
        order = [3, 1, 0, 2]
        shuffled = TrainingBatch(batch.features[order], batch.labels[order])
        a = fit_mnb(batch, alpha=1.0)
        b = fit_mnb(shuffled, alpha=1.0)
        np.testing.assert_array_equal(a.log_prior, b.log_prior)
        np.testing.assert_array_equal(a.log_likelihood, b.log_likelihood)

    def test_probabilities_sum_to_one(self):
        batch, vocab = make_batch(TOY_DOCS, TOY_LABELS, TOY_VOCAB)
        model = fit_mnb(batch, alpha=1.0)
        probs = model.predict_proba(count_matrix(vocab, ["bug login eat", ""]))
        np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-6)

    def test_empty_batch(self):
        with pytest.raises(EmptyBatch):
            TrainingBatch(np.zeros((0, 3)), np.zeros((0, 7)))

    def test_negative_features_rejected(self):
        with pytest.raises(ValueError):
            fit_mnb(TrainingBatch(np.array([[-1.0, 0.0]]), np.eye(7)[:1]), alpha=1.0)

    def test_tfidf_feature_switch(self):
        from roletriage.corpus import RoleLabel
        from roletriage.models import Hyperparameters, train_on_titles

        titles = ["navbar css layout", "database query cache"] * 6
        roles = [RoleLabel.FRONT_END_DEVELOPER, RoleLabel.BACK_END_DEVELOPER] * 6
        counts_model = train_on_titles("mnb", titles, roles, Hyperparameters())
        tfidf_model = train_on_titles(
            "mnb", titles, roles, Hyperparameters(mnb_use_tfidf=True)
        )
        assert counts_model.featurizer.kind == "counts"
        assert tfidf_model.featurizer.kind == "tfidf"
        for model in (counts_model, tfidf_model):
            probs = model.predict_proba_titles(["fix navbar css"])
            assert int(probs.argmax()) == RoleLabel.FRONT_END_DEVELOPER.index
