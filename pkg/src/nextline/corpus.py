"""Ordered dialogue corpus with adjacency structure.

A corpus concatenates the cleaned lines of several source files
("episodes").  Line L's reply is line L+1, except across an episode
boundary: the last line of one file is not answered by the first line
of the next.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from nextline.textprep import DEFAULT_MIN_LENGTH, DEFAULT_STOPWORDS, TermVector, preprocess


class EmptyCorpusError(ValueError):
    """Raised when corpus construction or search is given zero lines."""


@dataclass
class DialogueLine:
    id: int
    text: str
    episode: int
    vector: TermVector


@dataclass(eq=False)
class Corpus:
    lines: list[DialogueLine]
    episode_offsets: list[int]
    # Lazily built search structures; identity-keyed, never compared.
    _search_cache: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return len(self.lines)

    def has_reply(self, line_id: int) -> bool:
        """True when line_id+1 exists and belongs to the same episode."""
        if line_id < 0 or line_id + 1 >= self.n:
            return False
        return self.lines[line_id].episode == self.lines[line_id + 1].episode

    def reply_text(self, line_id: int) -> str:
        if not self.has_reply(line_id):
            raise IndexError(f"line {line_id} has no reply")
        return self.lines[line_id + 1].text

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Corpus):
            return NotImplemented
        return self.lines == other.lines and self.episode_offsets == other.episode_offsets


def build_corpus(
    files: Iterable[tuple[str, list[str]]],
    stopwords: frozenset[str] | set[str] = DEFAULT_STOPWORDS,
    min_length: int = DEFAULT_MIN_LENGTH,
) -> Corpus:
    """Assemble a corpus from (filename, cleaned utterances) pairs.

    Callers pass files already ordered by filename so construction is
    deterministic.  Files that contributed no utterances are skipped and
    get no episode slot.  Raises EmptyCorpusError when nothing survives.
    """
    lines: list[DialogueLine] = []
    offsets: list[int] = []
    episode = 0
    for _, utterances in files:
        if not utterances:
            continue
        offsets.append(len(lines))
        for text in utterances:
            lines.append(
                DialogueLine(
                    id=len(lines),
                    text=text,
                    episode=episode,
                    vector=preprocess(text, stopwords, min_length),
                )
            )
        episode += 1
    if not lines:
        raise EmptyCorpusError("no dialogue lines; corpus would be empty")
    return Corpus(lines=lines, episode_offsets=offsets)
