"""Shared fixtures, including discovery of the public benchmark datasets.

Benchmark-scale tests are marked ``dataset`` and skip unless the files are
present. Point SENTKIT_DATA_DIR at a directory laid out as:

    <data>/aclImdb/train/{pos,neg}/*.txt   and  <data>/aclImdb/test/{pos,neg}/*.txt
    <data>/sms/spam.csv
    <data>/amazon/train.ft.txt

or create ./data with that layout next to the package. The IMDB archive is
ai.stanford.edu/~amaas/data/sentiment/ (aclImdb_v1.tar.gz), the SMS file is
the Kaggle "SMS Spam Collection Dataset" csv, and the Amazon file is the
fastText-format amazon_review_polarity train split.
"""

import os
from pathlib import Path

import pytest

from sentkit import load_csv, load_imdb_dir, load_prefix_labeled, take_per_label


def data_root() -> Path:
    env = os.environ.get("SENTKIT_DATA_DIR")
    if env:
        return Path(env)
    return Path(__file__).resolve().parent.parent / "data"


def _skip(what: str, expected: Path, hint: str):
    pytest.skip(
        f"{what} not found (expected {expected}). {hint} "
        "See tests/conftest.py or README 'Datasets' for the layout."
    )


@pytest.fixture(scope="session")
def imdb_root():
    root = data_root() / "aclImdb"
    if not (root / "train" / "pos").is_dir():
        _skip(
            "IMDB review tree", root,
            "Download aclImdb_v1.tar.gz from ai.stanford.edu/~amaas/data/sentiment/ "
            "and extract it under the data directory.",
        )
    return root


@pytest.fixture(scope="session")
def imdb_corpus(imdb_root):
    return load_imdb_dir(imdb_root)


@pytest.fixture(scope="session")
def sms_corpus():
    path = data_root() / "sms" / "spam.csv"
    if not path.is_file():
        _skip(
            "SMS spam csv", path,
            "Download spam.csv from the Kaggle 'SMS Spam Collection Dataset'.",
        )
    try:
        return load_csv(path, label_column="v1", text_column="v2")
    except Exception:
        return load_csv(path, label_column="Category", text_column="Message")


@pytest.fixture(scope="session")
def amazon_corpus():
    path = data_root() / "amazon" / "train.ft.txt"
    if not path.is_file():
        _skip(
            "Amazon review file", path,
            "Download the fastText amazon_review_polarity train split "
            "(train.ft.txt) and place it under data/amazon/.",
        )
    full = load_prefix_labeled(path)
    return take_per_label(full, 25000)
