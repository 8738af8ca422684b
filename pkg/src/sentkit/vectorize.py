"""Bag-of-words features: top-K vocabulary, IDF table, sparse vectors.

Term weights follow the classic definitions: term frequency is the count
of a term divided by the total token count of the document (out-of-
vocabulary tokens included in the denominator), and inverse document
frequency is ln(1 + N / df) over the training collection. Binary vectors
record presence as 1.0. Nothing is length-normalized.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, TransformerMixin

from .exceptions import ConfigError, DataError
from .validation import check_is_fitted

__all__ = [
    "Vocabulary",
    "IdfTable",
    "build_vocabulary",
    "fit_idf",
    "binary_vector",
    "tfidf_vector",
    "to_csr",
    "BowVectorizer",
]

TokenLists = Sequence[Sequence[str]]


@dataclass(frozen=True)
class Vocabulary:
    """The retained feature terms, ordered by rank."""

    terms: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "index", {t: i for i, t in enumerate(self.terms)})
        if len(self.index) != len(self.terms):
            raise DataError("vocabulary contains duplicate terms")

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.index


@dataclass(frozen=True)
class IdfTable:
    """Document frequencies and idf weights aligned with a vocabulary."""

    n_docs: int
    df: np.ndarray   # int64, df[i] for vocabulary term i
    idf: np.ndarray  # float64, ln(1 + n_docs / df[i])

    @classmethod
    def from_df(cls, n_docs: int, df: np.ndarray) -> "IdfTable":
        df = np.asarray(df, dtype=np.int64)
        if n_docs < 1:
            raise DataError("idf table needs at least one training document")
        if df.size and (df.min() < 1 or df.max() > n_docs):
            raise DataError("document frequencies must lie in [1, n_docs]")
        idf = np.log1p(n_docs / df.astype(np.float64)) if df.size else np.zeros(0)
        return cls(n_docs=n_docs, df=df, idf=idf)


def build_vocabulary(token_lists: TokenLists, k: int) -> Vocabulary:
    """Top-``k`` terms by total occurrence count, ties broken alphabetically."""
    if k < 1:
        raise ConfigError(f"vocabulary size must be >= 1, got {k!r}")
    if len(token_lists) == 0:
        raise DataError("cannot build a vocabulary from an empty training set")
    counts: Counter[str] = Counter()
    for tokens in token_lists:
        counts.update(tokens)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return Vocabulary(terms=tuple(t for t, _ in ranked[:k]))


def fit_idf(token_lists: TokenLists, vocab: Vocabulary) -> IdfTable:
    """Count per-term document frequencies over the training lists."""
    if len(token_lists) == 0:
        raise DataError("cannot fit idf on an empty training set")
    df = np.zeros(len(vocab), dtype=np.int64)
    index = vocab.index
    for tokens in token_lists:
        for term in set(tokens):
            i = index.get(term)
            if i is not None:
                df[i] += 1
    if df.size and df.min() == 0:
        missing = vocab.terms[int(np.argmin(df))]
        raise DataError(
            f"vocabulary term {missing!r} occurs in no training document; "
            "vocabulary and corpus do not match"
        )
    return IdfTable.from_df(len(token_lists), df)


def binary_vector(tokens: Sequence[str], vocab: Vocabulary) -> list[tuple[int, float]]:
    """Sorted (feature index, 1.0) pairs for the vocabulary terms present."""
    index = vocab.index
    hits = {index[t] for t in tokens if t in index}
    return [(i, 1.0) for i in sorted(hits)]


def tfidf_vector(
    tokens: Sequence[str], vocab: Vocabulary, idf: IdfTable
) -> list[tuple[int, float]]:
    """Sorted (feature index, tf * idf) pairs; empty input yields no entries."""
    if len(idf.idf) != len(vocab):
        raise DataError("idf table does not match vocabulary size")
    n_tokens = len(tokens)
    if n_tokens == 0:
        return []
    index = vocab.index
    counts: Counter[str] = Counter(tokens)
    entries = []
    for term, c in counts.items():
        i = index.get(term)
        if i is not None:
            entries.append((i, (c / n_tokens) * idf.idf[i]))
    entries.sort()
    return entries


def to_csr(
    token_lists: TokenLists,
    vocab: Vocabulary,
    idf: IdfTable | None,
    weighting: str,
) -> sp.csr_matrix:
    """Stack per-document sparse vectors into a float64 CSR matrix."""
    if weighting not in ("binary", "tfidf"):
        raise ConfigError(f"weighting must be 'binary' or 'tfidf', got {weighting!r}")
    if weighting == "tfidf" and idf is None:
        raise ConfigError("tfidf weighting needs a fitted idf table")
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for tokens in token_lists:
        if weighting == "binary":
            entries = binary_vector(tokens, vocab)
        else:
            entries = tfidf_vector(tokens, vocab, idf)
        indices.extend(i for i, _ in entries)
        data.extend(w for _, w in entries)
        indptr.append(len(indices))
    return sp.csr_matrix(
        (np.array(data, dtype=np.float64),
         np.array(indices, dtype=np.int32),
         np.array(indptr, dtype=np.int64)),
        shape=(len(indptr) - 1, len(vocab)),
    )


class BowVectorizer(BaseEstimator, TransformerMixin):
    """Fit a vocabulary (and idf table) on token lists, transform to CSR.

    Parameters
    ----------
    k : requested vocabulary size; the fitted size is smaller when the
        training data has fewer distinct terms.
    weighting : "binary" for presence indicators, "tfidf" for tf * idf.

    Attributes
    ----------
    vocabulary_ : the fitted Vocabulary.
    idf_ : the fitted IdfTable, or None under binary weighting.
    n_features_ : number of columns produced by transform.
    """

    def __init__(self, k: int = 8000, weighting: str = "tfidf"):
        self.k = k
        self.weighting = weighting

    def _check_params(self):
        if self.weighting not in ("binary", "tfidf"):
            raise ConfigError(
                f"weighting must be 'binary' or 'tfidf', got {self.weighting!r}"
            )
        if self.k < 1:
            raise ConfigError(f"vocabulary size must be >= 1, got {self.k!r}")

    def fit(self, token_lists: TokenLists, y=None):
        self._check_params()
        self.vocabulary_ = build_vocabulary(token_lists, self.k)
        self.idf_ = fit_idf(token_lists, self.vocabulary_) if self.weighting == "tfidf" else None
        self.n_features_ = len(self.vocabulary_)
        return self

    def transform(self, token_lists: TokenLists) -> sp.csr_matrix:
        check_is_fitted(self, "vocabulary_")
        return to_csr(token_lists, self.vocabulary_, self.idf_, self.weighting)
