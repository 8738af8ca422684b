"""Multinomial naive Bayes over sparse feature masses.

Feature values act as (possibly fractional) pseudo-counts, so the same
estimator works for raw counts, binary indicators, and tf-idf weights.
Laplace-style smoothing with mass ``alpha`` keeps every likelihood
strictly positive.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .exceptions import ConfigError
from .validation import (
    as_csr,
    check_binary_labels,
    check_finite,
    check_is_fitted,
    check_non_negative,
)

__all__ = ["MultinomialNaiveBayes"]


class MultinomialNaiveBayes(BaseEstimator, ClassifierMixin):
    """Two-class multinomial naive Bayes.

    Attributes
    ----------
    class_log_prior_ : shape (2,), ln of class frequencies.
    feature_log_prob_ : shape (2, n_features), smoothed log likelihoods;
        each row exponentiates to a distribution summing to 1.
    classes_ : array([0, 1]).
    """

    def __init__(self, alpha: float = 1.0):
        self.alpha = alpha

    def fit(self, X, y):
        if not self.alpha > 0:
            raise ConfigError(f"smoothing alpha must be > 0, got {self.alpha!r}")
        X = as_csr(X)
        check_finite(X)
        check_non_negative(X)
        y01 = check_binary_labels(y, X.shape[0])
        n, k = X.shape

        class_count = np.bincount(y01, minlength=2).astype(np.float64)
        mass = np.zeros((2, k))
        for c in (0, 1):
            rows = X[y01 == c]
            mass[c] = np.asarray(rows.sum(axis=0)).ravel()

        self.class_log_prior_ = np.log(class_count / n)
        smoothed = self.alpha + mass
        self.feature_log_prob_ = np.log(smoothed / smoothed.sum(axis=1, keepdims=True))
        self.classes_ = np.array([0, 1])
        self.n_features_in_ = k
        return self

    def joint_log_likelihood(self, X) -> np.ndarray:
        check_is_fitted(self, "feature_log_prob_")
        X = as_csr(X, n_features=self.n_features_in_)
        check_non_negative(X)
        return X @ self.feature_log_prob_.T + self.class_log_prior_

    def decision_function(self, X) -> np.ndarray:
        jll = self.joint_log_likelihood(X)
        return jll[:, 1] - jll[:, 0]

    def predict(self, X) -> np.ndarray:
        # an exact posterior tie goes to the lower class index
        return (self.decision_function(X) > 0.0).astype(np.int64)
