"""Bug report text to stemmed, stopword-free token sequences."""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

from .stemmer import stem

_SPLIT_RE = re.compile(r"[^A-Za-z0-9_]+")


@lru_cache(maxsize=1)
def stopwords() -> frozenset[str]:
    text = resources.files("fixhints").joinpath("data/stopwords.txt").read_text(encoding="utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


def tokenize(text: str) -> list[str]:
    # str.lower() may map non-ASCII into ASCII ("K" kelvin sign -> "k"), so
    # split on ASCII classes first, then lowercase.
    tokens = []
    for tok in _SPLIT_RE.split(text):
        if len(tok) < 2 or tok.isdigit():
            continue
        tokens.append(tok.lower())
    return tokens


def remove_stopwords(tokens: list[str]) -> list[str]:
    stop = stopwords()
    return [t for t in tokens if t not in stop]


def preprocess_text(text: str) -> list[str]:
    return [stem(t) for t in remove_stopwords(tokenize(text))]


def preprocess(report) -> list[str]:
    """Token sequence of a report; only the short description is modeled."""
    return preprocess_text(report.short_desc)
