"""Template answers for quiz-style questions.

Three question shapes are recognized — "who is X", "what is X", and
"when is X [celebrated]" — and answered from a pluggable provider.  The
default provider reads a JSON fixture file; anything it cannot answer
falls through to retrieval.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

_PATTERNS = (
    ("who", re.compile(r"^\s*who\s+is\s+(.+?)\s*\??\s*$", re.IGNORECASE)),
    ("what", re.compile(r"^\s*what\s+is\s+(.+?)\s*\??\s*$", re.IGNORECASE)),
    (
        "when",
        re.compile(r"^\s*when\s+is\s+(.+?)(?:\s+celebrated)?\s*\??\s*$", re.IGNORECASE),
    ),
)

KINDS = ("who", "what", "when")


@dataclass(frozen=True)
class QueryKind:
    kind: str  # "who" | "what" | "when"
    entity: str


def classify_query(text: str) -> QueryKind | None:
    """Match the question templates, case-insensitively.

    The trailing "?" and (for "when") the word "celebrated" are stripped
    from the entity; the entity keeps its original casing.  Returns None
    for anything that fits no template.
    """
    for kind, pattern in _PATTERNS:
        match = pattern.match(text)
        if match:
            entity = match.group(1).rstrip("?").strip()
            if entity:
                return QueryKind(kind=kind, entity=entity)
    return None


class KnowledgeProvider(Protocol):
    def answer(self, kind: str, entity_key: str) -> str | None: ...


class FixtureProvider:
    """Answers from a JSON file of {"kind", "entity", "answer"} records."""

    def __init__(self, path: str | Path):
        records = json.loads(Path(path).read_text("utf-8"))
        self._entries: dict[tuple[str, str], str] = {}
        for record in records:
            kind = record["kind"]
            if kind not in KINDS:
                raise ValueError(f"unknown knowledge kind: {kind!r}")
            self._entries[(kind, record["entity"].strip().lower())] = record["answer"]

    def answer(self, kind: str, entity_key: str) -> str | None:
        return self._entries.get((kind, entity_key))

    def __len__(self) -> int:
        return len(self._entries)


def lookup(provider: KnowledgeProvider, q: QueryKind) -> str | None:
    """Resolve a classified query to a rendered answer, or None.

    Entities match by exact lowercase key.  The answer text comes
    verbatim from the provider, wrapped in a fixed sentence template.
    """
    answer = provider.answer(q.kind, q.entity.strip().lower())
    if answer is None:
        return None
    if q.kind == "when":
        return f"{q.entity} is celebrated on {answer}."
    return f"{q.entity} is {answer}."
