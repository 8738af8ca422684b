"""Random forest: determinism, split quality, tie rules, structure invariants."""

import numpy as np
import pytest
import scipy.sparse as sp

from sentkit import DataError, EntropyRandomForest
from sentkit.exceptions import ConfigError


def xor_data():
    X = np.array(
        [[1.0, 1.0], [1.0, 0.0], [0.0, 1.0], [0.0, 0.0]] * 3
    )
    y = np.array([0, 1, 1, 0] * 3)
    return sp.csr_matrix(X), y


def random_consistent_data(rng, n, k):
    """Rows with distinct feature vectors, so labels never conflict."""
    while True:
        X = (rng.integers(0, 4, size=(n, k)) * rng.random((n, k))).round(2)
        rows = {tuple(r) for r in X}
        if len(rows) == n:
            break
    y = rng.integers(0, 2, size=n).astype(np.int64)
    y[0], y[1] = 0, 1
    return sp.csr_matrix(X), y


class TestDeterminism:
    def test_same_seed_identical_trees(self):
        rng = np.random.default_rng(41)
        X, y = random_consistent_data(rng, 30, 6)
        a = EntropyRandomForest(n_trees=5, seed=9).fit(X, y)
        b = EntropyRandomForest(n_trees=5, seed=9).fit(X, y)
        assert len(a.trees_) == len(b.trees_)
        for ta, tb in zip(a.trees_, b.trees_):
            for key in ("feature", "threshold", "left", "right", "leaf"):
                assert (ta[key] == tb[key]).all()

    def test_same_seed_identical_predictions(self):
        rng = np.random.default_rng(43)
        X, y = random_consistent_data(rng, 40, 8)
        probes = sp.csr_matrix(rng.random((20, 8)).round(2))
        a = EntropyRandomForest(n_trees=11, seed=3).fit(X, y)
        b = EntropyRandomForest(n_trees=11, seed=3).fit(X, y)
        assert (a.predict(probes) == b.predict(probes)).all()
        assert (a.vote_counts(probes) == b.vote_counts(probes)).all()


class TestSplitting:
    def test_single_separating_feature_found(self):
        # feature 0 alone separates the classes; one shallow tree suffices
        X = sp.csr_matrix(
            np.array([[2.0, 5.0], [3.0, 1.0], [0.0, 5.0], [0.5, 1.0]] * 4)
        )
        y = np.array([1, 1, 0, 0] * 4)
        model = EntropyRandomForest(
            n_trees=1, features_per_split=2, bootstrap=False, seed=0
        ).fit(X, y)
        assert (model.predict(X) == y).all()
        tree = model.trees_[0]
        root = 0
        assert tree["feature"][root] == 0
        assert 0.5 <= tree["threshold"][root] < 2.0

    def test_depth_zero_predicts_majority(self):
        X = sp.csr_matrix(np.arange(10.0).reshape(5, 2))
        y = np.array([0, 0, 0, 1, 1])
        model = EntropyRandomForest(n_trees=1, max_depth=0, bootstrap=False).fit(X, y)
        probes = sp.csr_matrix(np.random.default_rng(0).random((6, 2)))
        assert (model.predict(probes) == 0).all()
        tree = model.trees_[0]
        assert len(tree["feature"]) == 1 and tree["feature"][0] == -1

    def test_consistent_data_memorized_by_full_tree(self):
        rng = np.random.default_rng(47)
        for trial in range(10):
            n = int(rng.integers(4, 40))
            k = int(rng.integers(2, 7))
            X, y = random_consistent_data(rng, n, k)
            model = EntropyRandomForest(
                n_trees=1,
                max_depth=None,
                min_split=2,
                features_per_split=k,
                bootstrap=False,
                seed=trial,
            ).fit(X, y)
            assert (model.predict(X) == y).all()

    def test_xor_needs_zero_gain_splits(self):
        X, y = xor_data()
        model = EntropyRandomForest(
            n_trees=1, max_depth=None, features_per_split=2, bootstrap=False
        ).fit(X, y)
        assert (model.predict(X) == y).all()


class TestVoting:
    @staticmethod
    def constant_tree(label):
        return {
            "feature": np.array([-1], dtype=np.int64),
            "threshold": np.array([0.0]),
            "left": np.array([-1], dtype=np.int64),
            "right": np.array([-1], dtype=np.int64),
            "leaf": np.array([label], dtype=np.int64),
        }

    def make_forest(self, labels):
        model = EntropyRandomForest(n_trees=len(labels))
        model.trees_ = [self.constant_tree(v) for v in labels]
        model.classes_ = np.array([0, 1])
        model.n_features_in_ = 3
        return model

    def test_majority_vote(self):
        probe = sp.csr_matrix((1, 3))
        assert self.make_forest([0, 0, 1]).predict(probe)[0] == 0
        assert self.make_forest([1, 1, 0]).predict(probe)[0] == 1

    def test_tied_vote_goes_to_class_zero(self):
        probe = sp.csr_matrix((1, 3))
        model = self.make_forest([0, 1])
        assert model.predict(probe)[0] == 0
        assert model.decision_function(probe)[0] == 0.0

    def test_single_constant_tree(self):
        probes = sp.csr_matrix(np.random.default_rng(1).random((5, 3)))
        assert (self.make_forest([1]).predict(probes) == 1).all()

    def test_vote_counts_bounded_by_n_trees(self):
        rng = np.random.default_rng(53)
        X, y = random_consistent_data(rng, 25, 5)
        model = EntropyRandomForest(n_trees=7, seed=2).fit(X, y)
        votes = model.vote_counts(X)
        assert votes.min() >= 0 and votes.max() <= 7


class TestStructure:
    def test_depth_respects_cap(self):
        rng = np.random.default_rng(59)
        X, y = random_consistent_data(rng, 60, 6)
        cap = 3
        model = EntropyRandomForest(n_trees=4, max_depth=cap, seed=1).fit(X, y)
        for tree in model.trees_:
            depth = {0: 0}
            deepest = 0
            for node in range(len(tree["feature"])):
                d = depth[node]
                deepest = max(deepest, d)
                if tree["feature"][node] >= 0:
                    depth[tree["left"][node]] = d + 1
                    depth[tree["right"][node]] = d + 1
            assert deepest <= cap

    def test_internal_nodes_have_two_children(self):
        rng = np.random.default_rng(61)
        X, y = random_consistent_data(rng, 30, 4)
        model = EntropyRandomForest(n_trees=3, seed=4).fit(X, y)
        for tree in model.trees_:
            for node in range(len(tree["feature"])):
                if tree["feature"][node] >= 0:
                    assert tree["left"][node] > node
                    assert tree["right"][node] > node
                else:
                    assert tree["leaf"][node] in (0, 1)


class TestValidation:
    def test_single_class_rejected(self):
        X = sp.csr_matrix(np.ones((4, 2)))
        with pytest.raises(DataError):
            EntropyRandomForest().fit(X, np.ones(4, dtype=int))

    def test_bad_params_rejected(self):
        X = sp.csr_matrix(np.eye(2))
        y = np.array([0, 1])
        bad = [
            EntropyRandomForest(n_trees=0),
            EntropyRandomForest(max_depth=-1),
            EntropyRandomForest(min_split=0),
            EntropyRandomForest(features_per_split=0),
        ]
        for model in bad:
            with pytest.raises(ConfigError):
                model.fit(X, y)

    def test_width_mismatch_at_predict(self):
        X = sp.csr_matrix(np.eye(3))
        y = np.array([0, 1, 0])
        model = EntropyRandomForest(n_trees=2, seed=0).fit(X, y)
        with pytest.raises(DataError):
            model.predict(sp.csr_matrix(np.ones((1, 5))))
