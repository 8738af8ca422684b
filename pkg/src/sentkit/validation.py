"""Input validation helpers for the estimator classes."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from sklearn.exceptions import NotFittedError

from .exceptions import ConfigError, DataError


def check_is_fitted(estimator, attribute: str) -> None:
    if getattr(estimator, attribute, None) is None:
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted yet; call fit() first."
        )


def as_csr(X, n_features: int | None = None) -> sp.csr_matrix:
    """Coerce input to a float64 CSR matrix with sorted indices."""
    if not sp.issparse(X):
        X = sp.csr_matrix(np.asarray(X, dtype=np.float64))
    X = X.tocsr().astype(np.float64, copy=False)
    X.sort_indices()
    if n_features is not None and X.shape[1] != n_features:
        raise DataError(
            f"expected {n_features} features, got matrix with {X.shape[1]}"
        )
    return X


def check_finite(X: sp.csr_matrix) -> None:
    if X.nnz and not np.isfinite(X.data).all():
        raise DataError("feature matrix contains non-finite values")


def check_non_negative(X: sp.csr_matrix) -> None:
    if X.nnz and X.data.min() < 0.0:
        raise DataError("feature matrix contains negative values")


def check_binary_labels(y, n_rows: int) -> np.ndarray:
    """Validate class labels: integers in {0, 1} with both classes present."""
    y = np.asarray(y)
    if y.ndim != 1 or y.shape[0] != n_rows:
        raise DataError(f"labels must be a 1-d array of length {n_rows}")
    if y.size == 0:
        raise DataError("cannot train on an empty dataset")
    if not np.isin(y, (0, 1)).all():
        raise DataError("labels must be class indices 0 or 1")
    y = y.astype(np.int8, copy=False)
    if (y == 0).all() or (y == 1).all():
        raise DataError("training data contains a single class; need both")
    return y


def check_positive(name: str, value, *, strict: bool = True) -> None:
    ok = value > 0 if strict else value >= 0
    if not ok:
        raise ConfigError(f"{name} must be {'> 0' if strict else '>= 0'}, got {value!r}")


def check_in(name: str, value, allowed) -> None:
    if value not in allowed:
        raise ConfigError(f"{name} must be one of {sorted(allowed)}, got {value!r}")
