"""Labeled text corpora: file loaders, holdout splits, and fold plans.

All loaders read UTF-8 and replace invalid byte sequences with U+FFFD so
that scrappy real-world dumps load without crashing. Documents keep their
file order; the label alphabet is the sorted set of distinct labels.
"""

from __future__ import annotations

import csv as _csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .exceptions import ConfigError, DataError, ParseError

__all__ = [
    "Document",
    "Corpus",
    "FoldPlan",
    "load_tsv",
    "load_csv",
    "load_prefix_labeled",
    "load_dir_tree",
    "load_imdb_dir",
    "write_tsv",
    "stratified_split",
    "stratified_split_indices",
    "stratified_kfold",
    "take_per_label",
    "concat",
]

_ENCODING = dict(encoding="utf-8", errors="replace")


@dataclass(frozen=True)
class Document:
    text: str
    label: str


class Corpus:
    """An ordered, immutable collection of labeled documents."""

    def __init__(self, docs: Iterable[Document]):
        self.docs: tuple[Document, ...] = tuple(docs)
        if not self.docs:
            raise DataError("corpus contains no documents")
        self.labels: tuple[str, ...] = tuple(sorted({d.label for d in self.docs}))
        for d in self.docs:
            if not d.label:
                raise DataError("document with empty label")

    def __len__(self) -> int:
        return len(self.docs)

    def __iter__(self):
        return iter(self.docs)

    def __getitem__(self, i: int) -> Document:
        return self.docs[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Corpus) and self.docs == other.docs

    def __repr__(self) -> str:
        return f"Corpus(n={len(self.docs)}, labels={list(self.labels)})"

    def texts(self) -> list[str]:
        return [d.text for d in self.docs]

    def label_indices(self) -> np.ndarray:
        """Per-document index into the sorted label alphabet."""
        lookup = {lab: i for i, lab in enumerate(self.labels)}
        return np.fromiter((lookup[d.label] for d in self.docs), dtype=np.int64, count=len(self.docs))

    def subset(self, indices: Sequence[int]) -> "Corpus":
        """Corpus restricted to ``indices``, keeping this corpus' label alphabet."""
        sub = Corpus(self.docs[i] for i in indices)
        # keep the parent alphabet so class indices stay stable across subsets
        sub.labels = self.labels
        return sub

    def class_counts(self) -> np.ndarray:
        """Documents per class, aligned with the label alphabet."""
        return np.bincount(self.label_indices(), minlength=len(self.labels))


@dataclass(frozen=True)
class FoldPlan:
    """Assignment of every document to one of ``k`` folds."""

    k: int
    assignments: np.ndarray  # shape (n_docs,), values in [0, k)

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)


def load_tsv(path: str | Path) -> Corpus:
    """Load ``label<TAB>text`` lines; extra tabs in the text become spaces."""
    docs = []
    with open(path, "r", newline="", **_ENCODING) as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.rstrip("\r\n")
            if not line:
                continue
            label, sep, text = line.partition("\t")
            if not sep:
                raise ParseError("expected 'label<TAB>text'", path=path, line=lineno)
            if not label:
                raise ParseError("empty label", path=path, line=lineno)
            docs.append(Document(text=text.replace("\t", " "), label=label))
    return Corpus(docs)


def write_tsv(corpus: Corpus, path: str | Path) -> None:
    """Write the canonical ``label<TAB>text`` interchange format.

    Tabs, newlines, and carriage returns inside a document are not
    representable and are rejected rather than silently mangled.
    """
    with open(path, "w", encoding="utf-8", newline="") as f:
        for i, d in enumerate(corpus):
            if any(c in d.text for c in "\t\n\r"):
                raise DataError(
                    f"document {i} contains a tab or newline and cannot be written as TSV"
                )
            if any(c in d.label for c in "\t\n\r"):
                raise DataError(f"document {i} has a label with a tab or newline")
            f.write(f"{d.label}\t{d.text}\n")


def load_csv(path: str | Path, label_column: str, text_column: str) -> Corpus:
    """Load an RFC 4180 CSV with a header row, e.g. the SMS spam dump."""
    docs = []
    with open(path, "r", newline="", **_ENCODING) as f:
        reader = _csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("missing header row", path=path, line=1) from None
        except _csv.Error as exc:
            raise ParseError(f"malformed CSV: {exc}", path=path, line=1) from exc
        try:
            label_i = header.index(label_column)
            text_i = header.index(text_column)
        except ValueError as exc:
            missing = label_column if label_column not in header else text_column
            raise ConfigError(
                f"{path}: no column named {missing!r} in header {header!r}"
            ) from exc
        try:
            for row in reader:
                if not row:
                    continue
                if len(row) <= max(label_i, text_i):
                    raise ParseError(
                        f"row has {len(row)} fields, need at least {max(label_i, text_i) + 1}",
                        path=path, line=reader.line_num,
                    )
                if not row[label_i]:
                    raise ParseError("empty label", path=path, line=reader.line_num)
                docs.append(Document(text=row[text_i], label=row[label_i]))
        except _csv.Error as exc:
            raise ParseError(f"malformed CSV: {exc}", path=path, line=reader.line_num) from exc
    return Corpus(docs)


def load_prefix_labeled(path: str | Path) -> Corpus:
    """Load ``__label__<L> text`` lines (the Amazon reviews dump format)."""
    docs = []
    prefix = "__label__"
    with open(path, "r", newline="", **_ENCODING) as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.rstrip("\r\n")
            if not line:
                continue
            if not line.startswith(prefix):
                raise ParseError(f"expected '{prefix}<L> <text>'", path=path, line=lineno)
            rest = line[len(prefix):]
            label, sep, text = rest.partition(" ")
            if not sep or not label:
                raise ParseError(f"expected '{prefix}<L> <text>'", path=path, line=lineno)
            docs.append(Document(text=text, label=label))
    return Corpus(docs)


def load_dir_tree(root: str | Path, subdir_to_label: Mapping[str, str]) -> Corpus:
    """Load one document per file from label-named subdirectories.

    ``subdir_to_label`` maps a relative subdirectory (possibly nested, e.g.
    ``train/pos``) to its label. Documents are ordered by (label, relative
    path) so loads are deterministic across filesystems.
    """
    root = Path(root)
    entries: list[tuple[str, str, Path]] = []
    for subdir, label in subdir_to_label.items():
        d = root / subdir
        if not d.is_dir():
            raise FileNotFoundError(f"missing corpus subdirectory: {d}")
        for p in d.iterdir():
            if p.is_file() and not p.name.startswith("."):
                entries.append((label, (Path(subdir) / p.name).as_posix(), p))
    entries.sort(key=lambda e: (e[0], e[1]))
    docs = [Document(text=p.read_text(**_ENCODING), label=label) for label, _, p in entries]
    return Corpus(docs)


def load_imdb_dir(root: str | Path) -> Corpus:
    """Load a pos/neg review tree, with or without a train/test level.

    Accepts either a directory holding ``pos/`` and ``neg/`` directly, or
    a root holding ``train/`` and ``test/`` which each contain them (both
    halves are loaded into one corpus; use a split to separate them).
    """
    root = Path(root)
    if (root / "train").is_dir() and (root / "test").is_dir():
        mapping = {
            "train/pos": "pos",
            "train/neg": "neg",
            "test/pos": "pos",
            "test/neg": "neg",
        }
    elif (root / "pos").is_dir() and (root / "neg").is_dir():
        mapping = {"pos": "pos", "neg": "neg"}
    else:
        raise DataError(
            f"{root} has neither train/test nor pos/neg subdirectories"
        )
    return load_dir_tree(root, mapping)


def _class_index_lists(corpus: Corpus) -> dict[str, list[int]]:
    by_class: dict[str, list[int]] = {lab: [] for lab in corpus.labels}
    for i, d in enumerate(corpus.docs):
        by_class[d.label].append(i)
    return by_class


def stratified_split_indices(
    corpus: Corpus, ratio: float, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Seeded per-class shuffle and split; returns (train, test) doc indices.

    Each class contributes round(ratio * class_size) documents to the train
    side, clamped so both sides keep at least one document per class. The
    returned index arrays are sorted, so document order is preserved.
    """
    if not 0.0 < ratio < 1.0:
        raise ConfigError(f"split ratio must be in (0, 1), got {ratio!r}")
    if len(corpus) == 0:
        raise DataError("cannot split an empty corpus")
    rng = np.random.default_rng(seed)
    train: list[int] = []
    test: list[int] = []
    by_class = _class_index_lists(corpus)
    for label in corpus.labels:
        idx = np.array(by_class[label], dtype=np.int64)
        if idx.size < 2:
            raise DataError(f"class {label!r} has {idx.size} document(s); need >= 2 to split")
        rng.shuffle(idx)
        n_train = int(np.floor(ratio * idx.size + 0.5))
        n_train = min(max(n_train, 1), idx.size - 1)
        train.extend(idx[:n_train].tolist())
        test.extend(idx[n_train:].tolist())
    return np.array(sorted(train), dtype=np.int64), np.array(sorted(test), dtype=np.int64)


def stratified_split(corpus: Corpus, ratio: float, seed: int) -> tuple[Corpus, Corpus]:
    train_idx, test_idx = stratified_split_indices(corpus, ratio, seed)
    return corpus.subset(train_idx), corpus.subset(test_idx)


def stratified_kfold(corpus: Corpus, k: int, seed: int) -> FoldPlan:
    """Assign every document to one of ``k`` folds, per-class balanced."""
    if k < 2:
        raise ConfigError(f"fold count must be >= 2, got {k!r}")
    if len(corpus) == 0:
        raise DataError("cannot fold an empty corpus")
    rng = np.random.default_rng(seed)
    assignments = np.empty(len(corpus), dtype=np.int64)
    by_class = _class_index_lists(corpus)
    for label in corpus.labels:
        idx = np.array(by_class[label], dtype=np.int64)
        if idx.size < k:
            raise DataError(
                f"class {label!r} has {idx.size} document(s); need >= {k} for {k} folds"
            )
        rng.shuffle(idx)
        for j, doc_i in enumerate(idx):
            assignments[doc_i] = j % k
    return FoldPlan(k=k, assignments=assignments)


def take_per_label(corpus: Corpus, n_per_label: int) -> Corpus:
    """Deterministic head subsample: the first ``n_per_label`` docs of each label."""
    if n_per_label < 1:
        raise ConfigError(f"n_per_label must be >= 1, got {n_per_label!r}")
    taken: dict[str, int] = {lab: 0 for lab in corpus.labels}
    keep = []
    for i, d in enumerate(corpus.docs):
        if taken[d.label] < n_per_label:
            taken[d.label] += 1
            keep.append(i)
    for lab, got in taken.items():
        if got < n_per_label:
            raise DataError(f"class {lab!r} has only {got} documents, wanted {n_per_label}")
    return corpus.subset(keep)


def concat(corpora: Sequence[Corpus]) -> Corpus:
    docs = [d for c in corpora for d in c.docs]
    return Corpus(docs)
