"""Raw text to token lists: normalization, next-word negation, stopwords.

The pipeline runs in a fixed order: normalize, then next-word negation,
then stopword removal. Negation must run before stopword removal because
the cue words ("not", "never", ...) would otherwise be deleted before
they can mark the following token.
"""

from __future__ import annotations

import re
import sys
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import AbstractSet, Iterable, Sequence

from sklearn.base import BaseEstimator, TransformerMixin

from .exceptions import ConfigError

__all__ = [
    "NEGATION_CUES",
    "NEGATION_PREFIX",
    "normalize",
    "apply_nwn",
    "remove_stopwords",
    "preprocess_document",
    "default_stopwords",
    "load_stopword_file",
    "Preprocessor",
]

NEGATION_PREFIX = "not_"

# Bare negation words plus the contraction forms they collapse to once
# apostrophes are deleted ("won't" -> "wont").
NEGATION_CUES: frozenset[str] = frozenset({
    "not", "no", "never", "none", "nobody", "nothing", "nowhere",
    "neither", "nor", "cannot",
    "dont", "doesnt", "didnt", "wont", "wouldnt", "couldnt", "shouldnt",
    "isnt", "arent", "wasnt", "werent", "hasnt", "havent", "hadnt",
    "cant", "aint", "neednt", "mustnt", "shant",
})

_APOSTROPHES = re.compile(r"['’ʼ]")
_NON_ALNUM = re.compile(r"[^a-z0-9]+")


def normalize(text: str, keep_single_chars: bool = False) -> list[str]:
    """Lowercase, strip punctuation, and split into tokens.

    Apostrophes are deleted outright so contractions collapse into one
    token ("won't" -> "wont"); every other non-alphanumeric character
    becomes a space. Length-1 tokens are dropped unless
    ``keep_single_chars`` is set.
    """
    text = _APOSTROPHES.sub("", text.lower())
    tokens = _NON_ALNUM.sub(" ", text).split()
    if not keep_single_chars:
        tokens = [t for t in tokens if len(t) > 1]
    return tokens


def apply_nwn(tokens: Sequence[str]) -> list[str]:
    """Next-word negation: drop each cue, prefix the next token with ``not_``.

    A single pending flag scans left to right: a cue sets it (consecutive
    cues collapse into one), the first following non-cue token is emitted
    as ``not_<token>``, and a flag still pending at the end of the
    document is discarded.
    """
    out: list[str] = []
    pending = False
    for tok in tokens:
        if tok in NEGATION_CUES:
            pending = True
        elif pending:
            out.append(NEGATION_PREFIX + tok)
            pending = False
        else:
            out.append(tok)
    return out


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    """The stopword list shipped with the package, minus all negation cues."""
    data = resources.files(__package__).joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(w for w in data.split() if w) - NEGATION_CUES


def load_stopword_file(path: str | Path) -> frozenset[str]:
    """Load a one-word-per-line stopword file; negation cues are ignored."""
    words = Path(path).read_text(encoding="utf-8").split()
    return frozenset(w.lower() for w in words if w) - NEGATION_CUES


def remove_stopwords(
    tokens: Sequence[str], stopwords: AbstractSet[str] | None = None
) -> list[str]:
    """Drop stopwords; ``not_``-prefixed tokens always survive."""
    if stopwords is None:
        stopwords = default_stopwords()
    return [
        t for t in tokens
        if t.startswith(NEGATION_PREFIX) or t in NEGATION_CUES or t not in stopwords
    ]


def preprocess_document(
    text: str,
    *,
    apply_negation: bool = True,
    drop_stopwords: bool = True,
    keep_single_chars: bool = False,
    stopwords: AbstractSet[str] | None = None,
) -> list[str]:
    """Full pipeline for one document: normalize -> negation -> stopwords."""
    tokens = normalize(text, keep_single_chars=keep_single_chars)
    if apply_negation:
        tokens = apply_nwn(tokens)
    if drop_stopwords:
        tokens = remove_stopwords(tokens, stopwords)
    return tokens


class Preprocessor(BaseEstimator, TransformerMixin):
    """Stateless transformer from raw texts to token lists.

    Parameters
    ----------
    apply_negation : run the next-word-negation stage.
    drop_stopwords : filter tokens against the stopword list.
    keep_single_chars : keep length-1 tokens during normalization.
    stopword_file : optional path overriding the built-in stopword list.
    """

    def __init__(
        self,
        apply_negation: bool = True,
        drop_stopwords: bool = True,
        keep_single_chars: bool = False,
        stopword_file: str | None = None,
    ):
        self.apply_negation = apply_negation
        self.drop_stopwords = drop_stopwords
        self.keep_single_chars = keep_single_chars
        self.stopword_file = stopword_file

    def fit(self, X=None, y=None):
        if self.stopword_file is not None:
            self.stopwords_ = load_stopword_file(self.stopword_file)
        else:
            self.stopwords_ = default_stopwords()
        return self

    def transform(self, X: Iterable[str]) -> list[list[str]]:
        if not hasattr(self, "stopwords_"):
            self.fit()
        # intern tokens so large corpora share one string object per term
        intern = sys.intern
        return [
            [intern(t) for t in preprocess_document(
                text,
                apply_negation=self.apply_negation,
                drop_stopwords=self.drop_stopwords,
                keep_single_chars=self.keep_single_chars,
                stopwords=self.stopwords_,
            )]
            for text in X
        ]

    def options_dict(self) -> dict:
        """Serializable record of the configuration, stopword list included."""
        if not hasattr(self, "stopwords_"):
            self.fit()
        return {
            "apply_negation": self.apply_negation,
            "drop_stopwords": self.drop_stopwords,
            "keep_single_chars": self.keep_single_chars,
            "stopwords": sorted(self.stopwords_),
        }

    @classmethod
    def from_options_dict(cls, options: dict) -> "Preprocessor":
        try:
            pre = cls(
                apply_negation=bool(options["apply_negation"]),
                drop_stopwords=bool(options["drop_stopwords"]),
                keep_single_chars=bool(options["keep_single_chars"]),
            )
            stop = frozenset(options["stopwords"])
        except KeyError as exc:
            raise ConfigError(f"preprocess options missing key {exc}") from exc
        pre.stopwords_ = stop - NEGATION_CUES
        return pre
