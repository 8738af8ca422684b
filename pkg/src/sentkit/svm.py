"""Linear SVM trained by dual coordinate descent.

Solves the L2-regularized L1-loss (hinge) problem in the dual, one
sample at a time, the way liblinear does. The bias is handled as an
implicit constant feature of value 1 appended to every sample, so the
weight vector carries one extra slot. Updates sweep the samples in a
freshly seeded random order each pass and stop when the largest
projected-gradient violation drops below ``tol``.
"""

from __future__ import annotations

import numpy as np
from numba import njit
from sklearn.base import BaseEstimator, ClassifierMixin

from .exceptions import ConfigError
from .validation import (
    as_csr,
    check_binary_labels,
    check_finite,
    check_is_fitted,
)

__all__ = ["LinearSvm"]


@njit(cache=True, nogil=True)
def _dcd_epoch(data, indices, indptr, ypm, qd, c, alpha, w, order, state, obj_out):
    """One pass over all samples in ``order``; returns max |projected gradient|.

    ``w`` has one slot per feature plus a trailing bias slot. ``state``
    carries [||w||^2, sum(alpha)] across passes so the dual objective can
    be tracked incrementally; ``obj_out`` (same length as ``order``, or
    empty to disable) receives the objective after each visited sample.
    """
    k_bias = w.shape[0] - 1
    wsq = state[0]
    asum = state[1]
    viol = 0.0
    record = obj_out.shape[0] > 0
    for t in range(order.shape[0]):
        i = order[t]
        start = indptr[i]
        end = indptr[i + 1]
        wx = w[k_bias]
        for p in range(start, end):
            wx += w[indices[p]] * data[p]
        y = ypm[i]
        g = y * wx - 1.0
        a = alpha[i]
        if a <= 0.0:
            pg = min(g, 0.0)
        elif a >= c:
            pg = max(g, 0.0)
        else:
            pg = g
        apg = abs(pg)
        if apg > viol:
            viol = apg
        if apg > 1e-12:
            a_new = a - g / qd[i]
            if a_new < 0.0:
                a_new = 0.0
            elif a_new > c:
                a_new = c
            d = a_new - a
            if d != 0.0:
                alpha[i] = a_new
                dy = d * y
                for p in range(start, end):
                    w[indices[p]] += dy * data[p]
                w[k_bias] += dy
                wsq += 2.0 * dy * wx + d * d * qd[i]
                asum += d
        if record:
            obj_out[t] = 0.5 * wsq - asum
    state[0] = wsq
    state[1] = asum
    return viol


class LinearSvm(BaseEstimator, ClassifierMixin):
    """Binary linear SVM with hinge loss.

    Parameters
    ----------
    c : misclassification cost (> 0).
    tol : stopping tolerance on the projected gradient.
    max_iter : cap on full passes over the data.
    seed : drives the per-pass sample permutation.
    record_objective : keep the dual objective after every coordinate
        update in ``objective_trace_`` (small runs only; costs memory).

    Attributes
    ----------
    w_ : feature weights, shape (n_features,).
    b_ : bias term.
    classes_ : array([0, 1]).
    n_iter_ : passes actually run.
    converged_ : whether ``tol`` was reached before ``max_iter``.
    objective_trace_ : per-update dual objective, or None.
    """

    def __init__(self, c: float = 1.0, tol: float = 1e-4, max_iter: int = 1000,
                 seed: int = 42, record_objective: bool = False):
        self.c = c
        self.tol = tol
        self.max_iter = max_iter
        self.seed = seed
        self.record_objective = record_objective

    def _check_params(self):
        if not self.c > 0:
            raise ConfigError(f"c must be > 0, got {self.c!r}")
        if not self.tol > 0:
            raise ConfigError(f"tol must be > 0, got {self.tol!r}")
        if self.max_iter < 1:
            raise ConfigError(f"max_iter must be >= 1, got {self.max_iter!r}")

    def fit(self, X, y):
        self._check_params()
        X = as_csr(X)
        check_finite(X)
        y01 = check_binary_labels(y, X.shape[0])
        n, k = X.shape

        ypm = (2.0 * y01 - 1.0).astype(np.float64)
        qd = np.asarray(X.multiply(X).sum(axis=1)).ravel() + 1.0
        alpha = np.zeros(n)
        w = np.zeros(k + 1)
        state = np.zeros(2)
        trace: list[np.ndarray] = []
        rng = np.random.default_rng(self.seed)

        self.converged_ = False
        n_iter = 0
        for _ in range(self.max_iter):
            order = rng.permutation(n)
            obj_out = np.empty(n) if self.record_objective else np.empty(0)
            viol = _dcd_epoch(X.data, X.indices, X.indptr, ypm, qd,
                              float(self.c), alpha, w, order, state, obj_out)
            n_iter += 1
            if self.record_objective:
                trace.append(obj_out)
            if viol < self.tol:
                self.converged_ = True
                break

        self.w_ = w[:k].copy()
        self.b_ = float(w[k])
        self.classes_ = np.array([0, 1])
        self.n_features_in_ = k
        self.n_iter_ = n_iter
        self.objective_trace_ = np.concatenate(trace) if trace else None
        return self

    def decision_function(self, X) -> np.ndarray:
        check_is_fitted(self, "w_")
        X = as_csr(X, n_features=self.n_features_in_)
        return X @ self.w_ + self.b_

    def predict(self, X) -> np.ndarray:
        # a decision value of exactly zero goes to the positive class
        return (self.decision_function(X) >= 0.0).astype(np.int64)
