"""Random forest with an entropy (information gain) split criterion.

Trees grow on seeded bootstrap samples of the training set, stored as
per-row multiplicity weights so each unique row is visited once. At
every node a random subset of features is scanned; candidate thresholds
sit at midpoints of consecutive distinct values, with the implicit-zero
block of the sparse column participating like any other value. Splits
maximize information gain, ties going to the lowest feature index and
then the lowest threshold. Zero-gain splits are accepted as long as
both sides are non-empty, which lets a deep unrestricted tree memorize
any consistent training set.
"""

from __future__ import annotations

import math

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

__all__ = ["EntropyRandomForest"]

_UNLIMITED_DEPTH = 2**31


@njit(cache=True, nogil=True)
def _csr_value(data, indices, indptr, row, f):
    """X[row, f] from a CSR triple with sorted indices; absent means 0."""
    lo = indptr[row]
    hi = indptr[row + 1] - 1
    while lo <= hi:
        mid = (lo + hi) >> 1
        j = indices[mid]
        if j == f:
            return data[mid]
        if j < f:
            lo = mid + 1
        else:
            hi = mid - 1
    return 0.0


@njit(cache=True, nogil=True)
def _entropy2(a, b):
    total = a + b
    if a <= 0.0 or b <= 0.0:
        return 0.0
    pa = a / total
    pb = b / total
    return -(pa * np.log(pa) + pb * np.log(pb))


@njit(cache=True, nogil=True)
def _grow_tree(data, indices, indptr, cdata, crows, cindptr, y,
               n_rows, n_features, tree_seed, max_depth, min_split,
               m_try, bootstrap):
    """Grow one tree; returns (feature, threshold, left, right, leaf, n_nodes).

    feature[v] == -1 marks a leaf with class leaf[v]; child ids are
    relative to this tree's own array.
    """
    np.random.seed(tree_seed)

    warr = np.zeros(n_rows)
    if bootstrap:
        for _ in range(n_rows):
            warr[np.random.randint(0, n_rows)] += 1.0
    else:
        for i in range(n_rows):
            warr[i] = 1.0
    m = 0
    for i in range(n_rows):
        if warr[i] > 0.0:
            m += 1
    rows = np.empty(m, np.int64)
    q = 0
    for i in range(n_rows):
        if warr[i] > 0.0:
            rows[q] = i
            q += 1

    cap = 2 * m + 3
    feat = np.full(cap, -1, np.int64)
    thr = np.zeros(cap)
    left = np.full(cap, -1, np.int64)
    right = np.full(cap, -1, np.int64)
    leaf = np.zeros(cap, np.int64)
    stack = np.empty((cap, 4), np.int64)

    stamp = np.full(n_rows, -1, np.int64)
    rstamp = np.full(n_rows, -1, np.int64)
    pool = np.arange(n_features)
    vals = np.empty(m)
    vrows = np.empty(m, np.int64)
    tmpl = np.empty(m, np.int64)
    tmpr = np.empty(m, np.int64)
    cand = np.empty(m_try, np.int64)

    n_nodes = 1
    node_counter = 0
    pcounter = 0
    top = 0
    stack[0, 0] = 0
    stack[0, 1] = 0
    stack[0, 2] = m
    stack[0, 3] = 0

    while top >= 0:
        node_id = stack[top, 0]
        s = stack[top, 1]
        e = stack[top, 2]
        depth = stack[top, 3]
        top -= 1

        w0 = 0.0
        w1 = 0.0
        for ii in range(s, e):
            r = rows[ii]
            if y[r] == 0:
                w0 += warr[r]
            else:
                w1 += warr[r]
        total = w0 + w1

        if w0 == 0.0 or w1 == 0.0 or depth >= max_depth or total < min_split:
            leaf[node_id] = 1 if w1 > w0 else 0
            continue

        node_counter += 1
        for ii in range(s, e):
            stamp[rows[ii]] = node_counter
        seg = e - s

        for j in range(m_try):
            rr = j + np.random.randint(0, n_features - j)
            tmp = pool[j]
            pool[j] = pool[rr]
            pool[rr] = tmp
            cand[j] = pool[j]
        cand_sorted = np.sort(cand)

        parent_ent = _entropy2(w0, w1)
        best_gain = -1.0
        best_f = -1
        best_t = 0.0

        for j in range(m_try):
            f = cand_sorted[j]
            col_lo = cindptr[f]
            col_hi = cindptr[f + 1]
            cnt = 0
            if col_hi - col_lo < 4 * seg:
                for p in range(col_lo, col_hi):
                    r = crows[p]
                    if stamp[r] == node_counter:
                        vals[cnt] = cdata[p]
                        vrows[cnt] = r
                        cnt += 1
            else:
                for ii in range(s, e):
                    r = rows[ii]
                    v = _csr_value(data, indices, indptr, r, f)
                    if v != 0.0:
                        vals[cnt] = v
                        vrows[cnt] = r
                        cnt += 1
            if cnt == 0:
                continue  # constant zero on this segment, nothing to split

            z0 = w0
            z1 = w1
            for p in range(cnt):
                r = vrows[p]
                if y[r] == 0:
                    z0 -= warr[r]
                else:
                    z1 -= warr[r]

            order = np.argsort(vals[:cnt])

            l0 = 0.0
            l1 = 0.0
            prev_v = 0.0
            started = False
            if z0 + z1 > 0.0:
                l0 = z0
                l1 = z1
                started = True
            p = 0
            while p < cnt:
                v = vals[order[p]]
                if started and v > prev_v:
                    t_mid = 0.5 * (prev_v + v)
                    if t_mid >= v:  # midpoint rounded up to v itself
                        t_mid = prev_v
                    r0 = w0 - l0
                    r1 = w1 - l1
                    gain = parent_ent - ((l0 + l1) * _entropy2(l0, l1)
                                         + (r0 + r1) * _entropy2(r0, r1)) / total
                    if gain > best_gain:
                        best_gain = gain
                        best_f = f
                        best_t = t_mid
                while p < cnt and vals[order[p]] == v:
                    r = vrows[order[p]]
                    if y[r] == 0:
                        l0 += warr[r]
                    else:
                        l1 += warr[r]
                    p += 1
                prev_v = v
                started = True

        if best_f < 0:
            # every candidate is constant on this segment
            leaf[node_id] = 1 if w1 > w0 else 0
            continue

        pcounter += 1
        col_lo = cindptr[best_f]
        col_hi = cindptr[best_f + 1]
        if col_hi - col_lo < 4 * seg:
            for p in range(col_lo, col_hi):
                r = crows[p]
                if stamp[r] == node_counter and cdata[p] > best_t:
                    rstamp[r] = pcounter
        else:
            for ii in range(s, e):
                r = rows[ii]
                if _csr_value(data, indices, indptr, r, best_f) > best_t:
                    rstamp[r] = pcounter
        nl = 0
        nr = 0
        for ii in range(s, e):
            r = rows[ii]
            if rstamp[r] == pcounter:
                tmpr[nr] = r
                nr += 1
            else:
                tmpl[nl] = r
                nl += 1
        for p in range(nl):
            rows[s + p] = tmpl[p]
        for p in range(nr):
            rows[s + nl + p] = tmpr[p]

        lid = n_nodes
        rid = n_nodes + 1
        n_nodes += 2
        feat[node_id] = best_f
        thr[node_id] = best_t
        left[node_id] = lid
        right[node_id] = rid
        top += 1
        stack[top, 0] = rid
        stack[top, 1] = s + nl
        stack[top, 2] = e
        stack[top, 3] = depth + 1
        top += 1
        stack[top, 0] = lid
        stack[top, 1] = s
        stack[top, 2] = s + nl
        stack[top, 3] = depth + 1

    return feat[:n_nodes], thr[:n_nodes], left[:n_nodes], right[:n_nodes], leaf[:n_nodes], n_nodes


@njit(cache=True, nogil=True)
def _forest_votes(data, indices, indptr, n_rows, feat, thr, left, right, leaf, offsets):
    """Class-1 vote count per row over all packed trees."""
    n_trees = offsets.shape[0] - 1
    votes = np.zeros(n_rows, np.int64)
    for i in range(n_rows):
        v1 = 0
        for t in range(n_trees):
            node = offsets[t]
            while feat[node] >= 0:
                x = _csr_value(data, indices, indptr, i, feat[node])
                if x <= thr[node]:
                    node = left[node]
                else:
                    node = right[node]
            v1 += leaf[node]
        votes[i] = v1
    return votes


class EntropyRandomForest(BaseEstimator, ClassifierMixin):
    """Bagged entropy-criterion decision trees with majority voting.

    Parameters
    ----------
    n_trees : number of trees.
    max_depth : maximum edges on a root-to-leaf path; None for unlimited.
    min_split : nodes with fewer (bootstrap-weighted) samples become leaves.
    features_per_split : features sampled per node; None means ceil(sqrt(K)).
    bootstrap : draw each tree's sample with replacement; disable to grow
        every tree on the full training set.
    seed : master seed; each tree derives an independent stream from it.

    Attributes
    ----------
    trees_ : per-tree node arrays (feature, threshold, left, right, leaf).
    classes_ : array([0, 1]).
    """

    def __init__(self, n_trees: int = 100, max_depth: int | None = 40,
                 min_split: int = 2, features_per_split: int | None = None,
                 bootstrap: bool = True, seed: int = 42):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_split = min_split
        self.features_per_split = features_per_split
        self.bootstrap = bootstrap
        self.seed = seed

    def _check_params(self):
        if self.n_trees < 1:
            raise ConfigError(f"n_trees must be >= 1, got {self.n_trees!r}")
        if self.max_depth is not None and self.max_depth < 0:
            raise ConfigError(f"max_depth must be >= 0 or None, got {self.max_depth!r}")
        if self.min_split < 1:
            raise ConfigError(f"min_split must be >= 1, got {self.min_split!r}")
        if self.features_per_split is not None and self.features_per_split < 1:
            raise ConfigError(
                f"features_per_split must be >= 1 or None, got {self.features_per_split!r}"
            )

    def fit(self, X, y):
        self._check_params()
        X = as_csr(X)
        check_finite(X)
        y01 = check_binary_labels(y, X.shape[0])
        n, k = X.shape

        Xc = X.tocsc()
        depth_cap = _UNLIMITED_DEPTH if self.max_depth is None else self.max_depth
        m_try = self.features_per_split
        if m_try is None:
            m_try = math.ceil(math.sqrt(k))
        m_try = min(m_try, k)

        seeds = np.random.SeedSequence(self.seed).spawn(self.n_trees)
        trees = []
        for child in seeds:
            tree_seed = int(child.generate_state(1)[0])
            feat, thr, left, right, leaf, n_nodes = _grow_tree(
                X.data, X.indices, X.indptr,
                Xc.data, Xc.indices, Xc.indptr,
                y01, n, k, tree_seed, depth_cap, self.min_split,
                m_try, self.bootstrap,
            )
            trees.append({
                "feature": feat.copy(),
                "threshold": thr.copy(),
                "left": left.copy(),
                "right": right.copy(),
                "leaf": leaf.copy(),
            })

        self.trees_ = trees
        self.classes_ = np.array([0, 1])
        self.n_features_in_ = k
        self._packed = self._pack(trees)
        return self

    @staticmethod
    def _pack(trees):
        """Concatenate tree arrays with absolute child indices."""
        offsets = np.zeros(len(trees) + 1, np.int64)
        for t, tree in enumerate(trees):
            offsets[t + 1] = offsets[t] + len(tree["feature"])
        feat = np.concatenate([t["feature"] for t in trees])
        thr = np.concatenate([t["threshold"] for t in trees])
        left = np.concatenate([t["left"] + off for t, off in zip(trees, offsets[:-1])])
        right = np.concatenate([t["right"] + off for t, off in zip(trees, offsets[:-1])])
        leaf = np.concatenate([t["leaf"] for t in trees])
        return feat, thr, left, right, leaf, offsets

    def vote_counts(self, X) -> np.ndarray:
        """Number of trees voting for class 1, per row."""
        check_is_fitted(self, "trees_")
        X = as_csr(X, n_features=self.n_features_in_)
        if not hasattr(self, "_packed"):
            self._packed = self._pack(self.trees_)
        feat, thr, left, right, leaf, offsets = self._packed
        return _forest_votes(X.data, X.indices, X.indptr, X.shape[0],
                             feat, thr, left, right, leaf, offsets)

    def decision_function(self, X) -> np.ndarray:
        """Vote margin for class 1, in [-1, 1]."""
        votes = self.vote_counts(X)
        return (2.0 * votes - len(self.trees_)) / len(self.trees_)

    def predict(self, X) -> np.ndarray:
        # a tied vote goes to the lower class index
        votes = self.vote_counts(X)
        return (2 * votes > len(self.trees_)).astype(np.int64)
