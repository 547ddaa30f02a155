"""Turning raw utterances into comparable term vectors.

The pipeline is tokenize -> filter -> stem -> count.  Filtering happens
before stemming so the stoplist matches words as people wrote them, and
stemming happens before counting so inflections of one word share a slot.
"""

from __future__ import annotations

import math
import re
from importlib import resources

from nextline.porter import stem

# A token is a maximal run of ASCII letters or digits.  Underscore is a
# separator here, unlike in \w.
_TOKEN_RE = re.compile(r"[a-z0-9]+")

TermVector = dict[str, float]

DEFAULT_MIN_LENGTH = 3


def _load_default_stopwords() -> frozenset[str]:
    text = resources.files("nextline.data").joinpath("stopwords.txt").read_text("utf-8")
    words = set()
    for line in text.splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            words.add(word.lower())
    return frozenset(words)


DEFAULT_STOPWORDS = _load_default_stopwords()


def tokenize(text: str) -> list[str]:
    """Lowercase *text* and split it into alphanumeric runs.

    Everything else (punctuation, whitespace, underscores) separates
    tokens and is discarded.  Order is preserved and duplicates are kept.
    """
    return _TOKEN_RE.findall(text.lower())


def filter_tokens(
    tokens: list[str],
    stopwords: frozenset[str] | set[str] = DEFAULT_STOPWORDS,
    min_length: int = DEFAULT_MIN_LENGTH,
) -> list[str]:
    """Drop tokens shorter than *min_length* and tokens in *stopwords*."""
    return [t for t in tokens if len(t) >= min_length and t not in stopwords]


def preprocess(
    text: str,
    stopwords: frozenset[str] | set[str] = DEFAULT_STOPWORDS,
    min_length: int = DEFAULT_MIN_LENGTH,
) -> TermVector:
    """Build a raw-count term vector from *text*.

    Keys are stemmed surviving tokens, values are occurrence counts.
    Counts are tallied after stemming, so "pick" and "picked" land in
    the same slot.
    """
    vector: TermVector = {}
    for token in filter_tokens(tokenize(text), stopwords, min_length):
        stemmed = stem(token)
        vector[stemmed] = vector.get(stemmed, 0.0) + 1.0
    return vector


def normalize(vector: TermVector, norm: str = "l2") -> TermVector:
    """Scale *vector* to unit length under the given norm.

    ``"l1"`` divides by the sum of values, ``"l2"`` by the Euclidean
    length.  The empty vector is returned as a new empty dict; any other
    norm name raises ValueError.
    """
    if norm == "l1":
        total = sum(vector.values())
    elif norm == "l2":
        total = math.sqrt(sum(v * v for v in vector.values()))
    else:
        raise ValueError(f"unknown norm: {norm!r}")
    if not vector:
        return {}
    return {term: value / total for term, value in vector.items()}
