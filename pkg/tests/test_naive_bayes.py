"""Multinomial naive Bayes: exact-arithmetic oracle, tie rules, validation."""

import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.sparse as sp

from sentkit import DataError, MultinomialNaiveBayes
from sentkit.exceptions import ConfigError


def exact_log_posteriors(X_train, y_train, x, alpha=1):
    """Posterior log-odds computed with rational arithmetic end to end.

    Returns (log P(c=0|x) - log Z, log P(c=1|x) - log Z) up to the shared
    evidence term, which cancels in the comparison.
    """
    n = len(y_train)
    k = len(X_train[0])
    out = []
    for c in (0, 1):
        rows = [X_train[i] for i in range(n) if y_train[i] == c]
        prior = Fraction(len(rows), n)
        mass = [sum(Fraction(r[j]) for r in rows) for j in range(k)]
        total = sum(mass)
        log_p = math.log(prior)
        for j in range(k):
            theta = (alpha + mass[j]) / (alpha * k + total)
            log_p += x[j] * math.log(theta)
        out.append(log_p)
    return out


class TestAgainstExactOracle:
    def test_probe_grid_matches_rational_arithmetic(self):
        rng = np.random.default_rng(17)
        for trial in range(20):
            n = int(rng.integers(2, 9))
            k = int(rng.integers(1, 5))
            X = rng.integers(0, 4, size=(n, k)).astype(np.float64)
            y = rng.integers(0, 2, size=n).astype(np.int64)
            y[0], y[1] = 0, 1
            model = MultinomialNaiveBayes().fit(sp.csr_matrix(X), y)
            probes = rng.integers(0, 3, size=(6, k)).astype(np.float64)
            decisions = model.decision_function(sp.csr_matrix(probes))
            preds = model.predict(sp.csr_matrix(probes))
            for p in range(len(probes)):
                lp0, lp1 = exact_log_posteriors(
                    X.astype(int).tolist(), y.tolist(), probes[p].astype(int).tolist()
                )
                assert decisions[p] == pytest.approx(lp1 - lp0, abs=1e-9)
                if abs(lp1 - lp0) > 1e-9:
                    assert preds[p] == (1 if lp1 > lp0 else 0)

    def test_two_word_hand_example(self):
        # positive doc is "good good", negative doc is "bad"; smoothing gives
        # theta(good|1) = 3/4 versus theta(good|0) = 1/3, so a lone "good"
        # must land positive
        X = sp.csr_matrix(np.array([[2.0, 0.0], [0.0, 1.0]]))
        y = np.array([1, 0])
        model = MultinomialNaiveBayes().fit(X, y)
        probe = sp.csr_matrix(np.array([[1.0, 0.0]]))
        assert model.predict(probe)[0] == 1
        expected = math.log(Fraction(3, 4)) - math.log(Fraction(1, 3))
        assert model.decision_function(probe)[0] == pytest.approx(expected, abs=1e-12)


class TestTieRule:
    def test_perfectly_symmetric_tie_goes_to_class_zero(self):
        X = sp.csr_matrix(np.array([[3.0, 1.0], [1.0, 3.0]]))
        y = np.array([0, 1])
        model = MultinomialNaiveBayes().fit(X, y)
        probe = sp.csr_matrix(np.array([[1.0, 1.0]]))
        assert model.decision_function(probe)[0] == 0.0
        assert model.predict(probe)[0] == 0

    def test_empty_probe_follows_prior(self):
        X = sp.csr_matrix(np.ones((3, 2)))
        y = np.array([0, 0, 1])
        model = MultinomialNaiveBayes().fit(X, y)
        probe = sp.csr_matrix((1, 2))
        assert model.decision_function(probe)[0] == pytest.approx(
            math.log(Fraction(1, 3)) - math.log(Fraction(2, 3))
        )
        assert model.predict(probe)[0] == 0


class TestFittedParameters:
    def test_log_priors_are_class_frequencies(self):
        X = sp.csr_matrix(np.ones((4, 2)))
        y = np.array([0, 0, 0, 1])
        model = MultinomialNaiveBayes().fit(X, y)
        assert model.class_log_prior_[0] == pytest.approx(math.log(0.75))
        assert model.class_log_prior_[1] == pytest.approx(math.log(0.25))

    def test_per_class_probabilities_sum_to_one(self):
        rng = np.random.default_rng(3)
        for trial in range(10):
            n = int(rng.integers(2, 12))
            k = int(rng.integers(1, 20))
            X = (rng.random((n, k)) * 5 * (rng.random((n, k)) < 0.5)).round(3)
            y = rng.integers(0, 2, size=n).astype(np.int64)
            y[0], y[1] = 0, 1
            model = MultinomialNaiveBayes().fit(sp.csr_matrix(X), y)
            sums = np.exp(model.feature_log_prob_).sum(axis=1)
            assert sums == pytest.approx([1.0, 1.0], abs=1e-9)

    def test_class_with_no_token_mass_is_uniform(self):
        X = sp.csr_matrix(np.array([[1.0, 2.0, 1.0], [0.0, 0.0, 0.0]]))
        y = np.array([1, 0])
        model = MultinomialNaiveBayes().fit(X, y)
        assert np.exp(model.feature_log_prob_[0]) == pytest.approx([1 / 3] * 3)

    def test_scaling_probe_preserves_argmax_under_equal_priors(self):
        rng = np.random.default_rng(29)
        X = rng.integers(0, 5, size=(6, 3)).astype(np.float64)
        y = np.array([0, 1, 0, 1, 0, 1])
        model = MultinomialNaiveBayes().fit(sp.csr_matrix(X), y)
        probes = rng.integers(0, 4, size=(8, 3)).astype(np.float64)
        d1 = model.decision_function(sp.csr_matrix(probes))
        d2 = model.decision_function(sp.csr_matrix(probes * 2.0))
        assert d2 == pytest.approx(2.0 * d1)


class TestValidation:
    def test_negative_features_rejected(self):
        X = sp.csr_matrix(np.array([[1.0, -0.5], [1.0, 1.0]]))
        with pytest.raises(DataError):
            MultinomialNaiveBayes().fit(X, np.array([0, 1]))

    def test_negative_probe_rejected(self):
        X = sp.csr_matrix(np.ones((2, 2)))
        model = MultinomialNaiveBayes().fit(X, np.array([0, 1]))
        with pytest.raises(DataError):
            model.predict(sp.csr_matrix(np.array([[-1.0, 0.0]])))

    def test_single_class_rejected(self):
        X = sp.csr_matrix(np.ones((3, 2)))
        with pytest.raises(DataError):
            MultinomialNaiveBayes().fit(X, np.zeros(3, dtype=int))

    def test_non_positive_alpha_rejected(self):
        X = sp.csr_matrix(np.ones((2, 2)))
        y = np.array([0, 1])
        for alpha in (0.0, -1.0):
            with pytest.raises(ConfigError):
                MultinomialNaiveBayes(alpha=alpha).fit(X, y)
