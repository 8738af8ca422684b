"""Experiment harness: holdout runs, cross-validation, feature sweeps,
and side-by-side comparisons, with JSON/CSV report writers.

Every run follows the same leakage-free recipe: split first, then fit
the vocabulary and idf table on the training side only, vectorize both
sides, train, and score the held-out documents. Identical configs
(seed included) produce identical reports.

The environment variable ``NWN_THREADS`` caps how many independent runs
(folds, sweep points, comparison variants) execute concurrently;
unset or 1 means sequential.
"""

from __future__ import annotations

import csv as _csv
import io
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .corpus import (
    Corpus,
    load_csv,
    load_imdb_dir,
    load_prefix_labeled,
    load_tsv,
    stratified_kfold,
    stratified_split_indices,
)
from .exceptions import ConfigError, DataError
from .forest import EntropyRandomForest
from .naive_bayes import MultinomialNaiveBayes
from .preprocess import Preprocessor
from .svm import LinearSvm
from .vectorize import BowVectorizer
from .validation import check_in

__all__ = [
    "ExperimentConfig",
    "EvalReport",
    "CvReport",
    "SweepReport",
    "accuracy",
    "load_corpus",
    "run_holdout",
    "run_cv",
    "run_feature_sweep",
    "compare",
    "reports_to_csv",
    "report_to_json",
]

FORMATS = ("tsv", "csv", "prefix", "imdb-dir")
REPRESENTATIONS = ("binary", "tfidf", "tfidf_nwn")
MODELS = ("lsvm", "mnb", "merf")

_CSV_FIELDS = [
    "data", "format", "representation", "model", "k_features", "split",
    "seed", "fold", "n_train", "n_test", "tp", "fp", "tn", "fn",
    "seconds", "accuracy",
]


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a single training/evaluation run depends on."""

    data: str = ""
    format: str = "tsv"
    label_col: str | None = None
    text_col: str | None = None
    representation: str = "tfidf_nwn"
    model: str = "lsvm"
    k_features: int = 8000
    split: float = 0.8
    seed: int = 42
    stopwords: bool = True
    keep_single_chars: bool = False
    stopword_file: str | None = None
    model_params: dict = field(default_factory=dict)

    def validate(self) -> "ExperimentConfig":
        check_in("format", self.format, FORMATS)
        check_in("representation", self.representation, REPRESENTATIONS)
        check_in("model", self.model, MODELS)
        if self.k_features < 1:
            raise ConfigError(f"k_features must be >= 1, got {self.k_features!r}")
        if not 0.0 < self.split < 1.0:
            raise ConfigError(f"split must lie in (0, 1), got {self.split!r}")
        return self

    def preprocessor(self) -> Preprocessor:
        return Preprocessor(
            apply_negation=self.representation == "tfidf_nwn",
            drop_stopwords=self.stopwords,
            keep_single_chars=self.keep_single_chars,
            stopword_file=self.stopword_file,
        )

    def weighting(self) -> str:
        return "binary" if self.representation == "binary" else "tfidf"

    def make_model(self):
        params = dict(self.model_params)
        if self.model == "lsvm":
            return LinearSvm(**{"seed": self.seed, **params})
        if self.model == "mnb":
            return MultinomialNaiveBayes(**params)
        return EntropyRandomForest(**{"seed": self.seed, **params})


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    n_train: int
    n_test: int
    tp: int
    fp: int
    tn: int
    fn: int
    seconds: float
    config: dict
    fold: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    def rows(self) -> list[dict]:
        row = {**self.config, **asdict(self)}
        row.pop("config")
        return [row]


@dataclass(frozen=True)
class CvReport:
    folds: list[float]
    mean: float
    std: float
    reports: list[EvalReport]
    config: dict

    def to_dict(self) -> dict:
        return {
            "folds": self.folds,
            "mean": self.mean,
            "std": self.std,
            "config": self.config,
            "reports": [r.to_dict() for r in self.reports],
        }

    def rows(self) -> list[dict]:
        return [row for r in self.reports for row in r.rows()]


@dataclass(frozen=True)
class SweepReport:
    rows_: list[tuple[int, float]]
    reports: list[EvalReport]
    config: dict

    def to_dict(self) -> dict:
        return {
            "sweep": [{"k_features": k, "accuracy": a} for k, a in self.rows_],
            "config": self.config,
            "reports": [r.to_dict() for r in self.reports],
        }

    def rows(self) -> list[dict]:
        return [row for r in self.reports for row in r.rows()]


def accuracy(predictions, truth) -> float:
    predictions = np.asarray(predictions)
    truth = np.asarray(truth)
    if predictions.shape != truth.shape or predictions.ndim != 1:
        raise DataError("predictions and truth must be 1-d arrays of equal length")
    if predictions.size == 0:
        raise DataError("cannot score an empty prediction set")
    return float((predictions == truth).sum() / predictions.size)


def load_corpus(config: ExperimentConfig) -> Corpus:
    if not config.data:
        raise ConfigError("no dataset path given")
    if config.format == "tsv":
        return load_tsv(config.data)
    if config.format == "csv":
        if not config.label_col or not config.text_col:
            raise ConfigError("csv format needs label_col and text_col")
        return load_csv(config.data, label_column=config.label_col,
                        text_column=config.text_col)
    if config.format == "prefix":
        return load_prefix_labeled(config.data)
    return load_imdb_dir(config.data)


def _require_binary(corpus: Corpus) -> None:
    if len(corpus.labels) != 2:
        raise DataError(
            f"need exactly 2 classes, corpus has {len(corpus.labels)}: {list(corpus.labels)}"
        )


def _max_workers() -> int:
    raw = os.environ.get("NWN_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"NWN_THREADS must be an integer, got {raw!r}")


def _map_runs(fn, items):
    """Run items (possibly) concurrently, preserving input order."""
    workers = _max_workers()
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _fit_and_score(config, train_tokens, test_tokens, y_train, y_test, fold=None):
    t0 = time.perf_counter()
    vec = BowVectorizer(k=config.k_features, weighting=config.weighting())
    X_train = vec.fit(train_tokens).transform(train_tokens)
    X_test = vec.transform(test_tokens)
    model = config.make_model()
    model.fit(X_train, y_train)
    pred = model.predict(X_test)
    seconds = time.perf_counter() - t0

    tp = int(((pred == 1) & (y_test == 1)).sum())
    fp = int(((pred == 1) & (y_test == 0)).sum())
    tn = int(((pred == 0) & (y_test == 0)).sum())
    fn = int(((pred == 0) & (y_test == 1)).sum())
    return EvalReport(
        accuracy=accuracy(pred, y_test),
        n_train=len(train_tokens),
        n_test=len(test_tokens),
        tp=tp, fp=fp, tn=tn, fn=fn,
        seconds=seconds,
        config=asdict(config),
        fold=fold,
    )


def run_holdout(config: ExperimentConfig, corpus: Corpus | None = None,
                _tokens=None) -> EvalReport:
    """Split, fit on the training side only, score the held-out side."""
    config.validate()
    if corpus is None:
        corpus = load_corpus(config)
    _require_binary(corpus)
    tokens = _tokens if _tokens is not None else config.preprocessor().fit().transform(corpus.texts())
    y = corpus.label_indices()
    tr, te = stratified_split_indices(corpus, config.split, config.seed)
    return _fit_and_score(
        config,
        [tokens[i] for i in tr], [tokens[i] for i in te],
        y[tr], y[te],
    )


def run_cv(config: ExperimentConfig, k: int, corpus: Corpus | None = None) -> CvReport:
    """K-fold cross-validation with per-fold vocabulary and idf refits."""
    config.validate()
    if corpus is None:
        corpus = load_corpus(config)
    _require_binary(corpus)
    tokens = config.preprocessor().fit().transform(corpus.texts())
    y = corpus.label_indices()
    plan = stratified_kfold(corpus, k, config.seed)

    def one_fold(f):
        tr = plan.train_indices(f)
        te = plan.test_indices(f)
        return _fit_and_score(
            config,
            [tokens[i] for i in tr], [tokens[i] for i in te],
            y[tr], y[te],
            fold=f,
        )

    reports = _map_runs(one_fold, list(range(k)))
    folds = [r.accuracy for r in reports]
    return CvReport(
        folds=folds,
        mean=float(np.mean(folds)),
        std=float(np.std(folds)),
        reports=reports,
        config=asdict(config),
    )


def run_feature_sweep(config: ExperimentConfig, sizes: list[int]) -> SweepReport:
    """One holdout run per vocabulary size, sharing a single split."""
    config.validate()
    if not sizes:
        raise ConfigError("sweep needs at least one vocabulary size")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ConfigError(f"sweep sizes must be strictly increasing, got {sizes!r}")
    if sizes[0] < 1:
        raise ConfigError(f"vocabulary sizes must be >= 1, got {sizes!r}")
    corpus = load_corpus(config)
    _require_binary(corpus)
    tokens = config.preprocessor().fit().transform(corpus.texts())

    def one_size(k):
        return run_holdout(replace(config, k_features=k), corpus, _tokens=tokens)

    reports = _map_runs(one_size, sizes)
    return SweepReport(
        rows_=[(k, r.accuracy) for k, r in zip(sizes, reports)],
        reports=reports,
        config=asdict(config),
    )


def compare(config: ExperimentConfig, axis: str,
            variants: list[str] | None = None) -> list[EvalReport]:
    """Holdout runs that differ in exactly one config field."""
    check_in("axis", axis, ("model", "representation"))
    allowed = MODELS if axis == "model" else REPRESENTATIONS
    if variants is None:
        variants = list(allowed)
    if not variants:
        raise ConfigError("compare needs at least one variant")
    for v in variants:
        check_in(axis, v, allowed)
    config.validate()
    corpus = load_corpus(config)
    _require_binary(corpus)

    # token lists depend only on the preprocess side of the config, so
    # variants sharing preprocess options share one tokenization pass
    token_cache: dict[tuple, list] = {}

    def tokens_for(cfg):
        key = (cfg.representation == "tfidf_nwn", cfg.stopwords,
               cfg.keep_single_chars, cfg.stopword_file)
        if key not in token_cache:
            token_cache[key] = cfg.preprocessor().fit().transform(corpus.texts())
        return token_cache[key]

    configs = [replace(config, **{("model" if axis == "model" else "representation"): v})
               for v in variants]
    for cfg in configs:
        tokens_for(cfg)  # fill the cache before running concurrently

    return _map_runs(lambda cfg: run_holdout(cfg, corpus, _tokens=tokens_for(cfg)), configs)


def report_to_json(report) -> str:
    if isinstance(report, list):
        doc = [r.to_dict() for r in report]
    else:
        doc = report.to_dict()
    return json.dumps(doc, indent=2)


def reports_to_csv(report) -> str:
    """Flat one-line-per-run rows with config columns first."""
    if isinstance(report, list):
        rows = [row for r in report for row in r.rows()]
    else:
        rows = report.rows()
    buf = io.StringIO()
    writer = _csv.DictWriter(buf, fieldnames=_CSV_FIELDS, extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()
