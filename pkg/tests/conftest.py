"""Shared fixtures: a tiny hand-written corpus plus builders for bigger ones."""

from __future__ import annotations

import random
import string

import pytest

from nextline.corpus import Corpus, build_corpus


TINY_UTTERANCES = [
    "Hello there.",
    "Hi, how are you?",
    "I am fine, thanks for asking.",
    "What are you doing tonight?",
    "Nothing much, just reading.",
]

SECOND_EPISODE = [
    "Did you see the picture?",
    "I picked it up yesterday.",
    "The colors are beautiful.",
]


@pytest.fixture
def tiny_corpus() -> Corpus:
    """Two short episodes; the last line of each has no reply."""
    return build_corpus(
        [("ep1.srt", TINY_UTTERANCES), ("ep2.srt", SECOND_EPISODE)]
    )


@pytest.fixture
def single_episode_corpus() -> Corpus:
    return build_corpus([("only.srt", TINY_UTTERANCES)])


def make_random_corpus(
    n_lines: int,
    *,
    seed: int = 0,
    episodes: int = 4,
    vocab: int = 400,
) -> Corpus:
    """Deterministic synthetic corpus for equivalence and scale tests."""
    rng = random.Random(seed)
    words = []
    while len(words) < vocab:
        w = "".join(rng.choice(string.ascii_lowercase) for _ in range(rng.randint(3, 9)))
        if w not in words:
            words.append(w)
    per_episode = [n_lines // episodes] * episodes
    for i in range(n_lines % episodes):
        per_episode[i] += 1
    files = []
    for ep, count in enumerate(per_episode):
        utterances = []
        for _ in range(count):
            sentence = " ".join(rng.choice(words) for _ in range(rng.randint(2, 9)))
            utterances.append(sentence.capitalize() + ".")
        files.append((f"ep{ep:03d}.srt", utterances))
    return build_corpus(files)


def typo_queries(corpus: Corpus, count: int, *, seed: int = 1) -> list[str]:
    """Corpus lines with a single-character edit, plus a few verbatim ones."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        text = corpus.lines[rng.randrange(corpus.n)].text
        roll = rng.random()
        if roll < 0.4 and len(text) > 2:
            i = rng.randrange(len(text))
            text = text[:i] + rng.choice(string.ascii_lowercase) + text[i + 1 :]
        elif roll < 0.6:
            words = text.split()
            if len(words) > 1:
                words.pop(rng.randrange(len(words)))
                text = " ".join(words)
        out.append(text)
    return out
