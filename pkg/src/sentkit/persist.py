"""Save and load trained models as versioned JSON bundles.

A bundle carries everything prediction needs: the representation name,
the preprocessing options (stopword list embedded), the vocabulary, the
idf document frequencies (idf weights are recomputed on load), and the
model payload. Class labels ride inside the payload so a loaded bundle
maps predictions back to the original label strings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import ModelFormatError, ParseError
from .forest import EntropyRandomForest
from .naive_bayes import MultinomialNaiveBayes
from .preprocess import Preprocessor
from .svm import LinearSvm
from .vectorize import IdfTable, Vocabulary, to_csr

__all__ = ["FORMAT_VERSION", "REPRESENTATIONS", "ModelBundle", "save_model", "load_model"]

FORMAT_VERSION = 1
REPRESENTATIONS = ("binary", "tfidf", "tfidf_nwn")
MODEL_KINDS = ("lsvm", "mnb", "merf")


def _weighting(representation: str) -> str:
    return "binary" if representation == "binary" else "tfidf"


@dataclass
class ModelBundle:
    """A trained model plus the artifacts needed to score raw text."""

    representation: str
    preprocessor: Preprocessor
    vocabulary: Vocabulary
    idf: IdfTable | None
    model: object
    labels: tuple[str, str]

    def __post_init__(self):
        if self.representation not in REPRESENTATIONS:
            raise ModelFormatError(f"unknown representation {self.representation!r}")
        if self.model_kind is None:
            raise ModelFormatError(f"unsupported model type {type(self.model).__name__}")
        if len(self.labels) != 2:
            raise ModelFormatError("bundle needs exactly two class labels")

    @property
    def model_kind(self) -> str | None:
        if isinstance(self.model, LinearSvm):
            return "lsvm"
        if isinstance(self.model, MultinomialNaiveBayes):
            return "mnb"
        if isinstance(self.model, EntropyRandomForest):
            return "merf"
        return None

    def vectorize_tokens(self, token_lists):
        return to_csr(token_lists, self.vocabulary, self.idf, _weighting(self.representation))

    def predict_texts(self, texts):
        """Score raw documents; returns (label strings, decision values)."""
        tokens = self.preprocessor.transform(texts)
        X = self.vectorize_tokens(tokens)
        pred = self.model.predict(X)
        decisions = self.model.decision_function(X)
        return [self.labels[int(i)] for i in pred], decisions

    def to_dict(self) -> dict:
        kind = self.model_kind
        if kind == "lsvm":
            payload = {
                "labels": list(self.labels),
                "w": self.model.w_.tolist(),
                "b": self.model.b_,
                "params": self.model.get_params(),
            }
        elif kind == "mnb":
            payload = {
                "labels": list(self.labels),
                "class_log_prior": self.model.class_log_prior_.tolist(),
                "feature_log_prob": self.model.feature_log_prob_.tolist(),
                "params": self.model.get_params(),
            }
        else:
            payload = {
                "labels": list(self.labels),
                "params": self.model.get_params(),
                "trees": [
                    {name: arr.tolist() for name, arr in tree.items()}
                    for tree in self.model.trees_
                ],
            }
        return {
            "format_version": FORMAT_VERSION,
            "representation": self.representation,
            "preprocess_options": self.preprocessor.options_dict(),
            "vocabulary": list(self.vocabulary.terms),
            "idf": None if self.idf is None else {
                "n_docs": self.idf.n_docs,
                "df": self.idf.df.tolist(),
            },
            "model_kind": kind,
            "model_payload": payload,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ModelBundle":
        if not isinstance(doc, dict):
            raise ModelFormatError("model file does not hold a JSON object")
        version = doc.get("format_version")
        if version != FORMAT_VERSION:
            raise ModelFormatError(
                f"model format version {version!r} not supported (expected {FORMAT_VERSION})"
            )
        try:
            representation = doc["representation"]
            options = doc["preprocess_options"]
            vocab = Vocabulary(tuple(doc["vocabulary"]))
            idf_doc = doc["idf"]
            kind = doc["model_kind"]
            payload = doc["model_payload"]
            labels = tuple(payload["labels"])
            if kind not in MODEL_KINDS:
                raise ModelFormatError(f"unknown model kind {kind!r}")
            idf = None
            if idf_doc is not None:
                idf = IdfTable.from_df(idf_doc["n_docs"], np.array(idf_doc["df"], dtype=np.int64))
            n_features = len(vocab)
            if kind == "lsvm":
                model = LinearSvm(**payload["params"])
                model.w_ = np.array(payload["w"], dtype=np.float64)
                model.b_ = float(payload["b"])
                model.classes_ = np.array([0, 1])
                model.n_features_in_ = n_features
            elif kind == "mnb":
                model = MultinomialNaiveBayes(**payload["params"])
                model.class_log_prior_ = np.array(payload["class_log_prior"], dtype=np.float64)
                model.feature_log_prob_ = np.array(payload["feature_log_prob"], dtype=np.float64)
                model.classes_ = np.array([0, 1])
                model.n_features_in_ = n_features
            else:
                model = EntropyRandomForest(**payload["params"])
                model.trees_ = [
                    {
                        "feature": np.array(t["feature"], dtype=np.int64),
                        "threshold": np.array(t["threshold"], dtype=np.float64),
                        "left": np.array(t["left"], dtype=np.int64),
                        "right": np.array(t["right"], dtype=np.int64),
                        "leaf": np.array(t["leaf"], dtype=np.int64),
                    }
                    for t in payload["trees"]
                ]
                model.classes_ = np.array([0, 1])
                model.n_features_in_ = n_features
            return cls(
                representation=representation,
                preprocessor=Preprocessor.from_options_dict(options),
                vocabulary=vocab,
                idf=idf,
                model=model,
                labels=labels,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ModelFormatError(f"malformed model bundle: {exc}") from exc


def save_model(bundle: ModelBundle, path) -> None:
    doc = bundle.to_dict()
    Path(path).write_text(json.dumps(doc), encoding="utf-8")


def load_model(path) -> ModelBundle:
    raw = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not a valid model file: {exc}", path=str(path)) from exc
    return ModelBundle.from_dict(doc)
