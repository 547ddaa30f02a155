"""Conversation orchestration.

A turn is routed in order: knowledge template answer, then corpus/
learned retrieval (reply = the line after the best match, if the match
clears the threshold), then the pronoun-swap mirror as the fallback.
Each completed exchange feeds the learning loop: the user's reply to a
bot utterance is appended as a new retrievable pair.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from nextline import store as store_mod
from nextline.corpus import Corpus
from nextline.knowledge import KnowledgeProvider, classify_query, lookup
from nextline.search import MatchResult, SearchDomain, best_match, build_index
from nextline.store import LearnedPair
from nextline.textprep import DEFAULT_MIN_LENGTH, DEFAULT_STOPWORDS

DEFAULT_THRESHOLDS = {"lev": 0.5, "bow-l1": 0.35, "bow-l2": 0.25}

PROVENANCE_CORPUS = "corpus"
PROVENANCE_LEARNED = "learned"
PROVENANCE_KNOWLEDGE = "knowledge"
PROVENANCE_PRONOUN = "pronoun-swap"


def _load_pronoun_pairs(path: str | Path | None) -> list[tuple[str, str]]:
    if path is None:
        text = resources.files("nextline.data").joinpath("pronouns.json").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    return [(a.lower(), b.lower()) for a, b in json.loads(text)]


def load_stopwords(path: str | Path | None) -> frozenset[str]:
    if path is None:
        return DEFAULT_STOPWORDS
    words = set()
    for line in Path(path).read_text("utf-8").splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            words.add(word.lower())
    return frozenset(words)


@dataclass
class EngineConfig:
    strategy: str = "lev"
    mode: str = "indexed"
    threshold: float | None = None  # None -> per-strategy default
    workers: int = 1
    min_length: int = DEFAULT_MIN_LENGTH
    stoplist_path: str | None = None
    pronoun_table_path: str | None = None
    knowledge_path: str | None = None
    learned_path: str | None = None
    sessions_dir: str | None = None
    bind: str = "127.0.0.1"
    port: int = 8080
    cors_origin: str | None = None
    static_dir: str | None = None

    @classmethod
    def from_file(cls, path: str | Path) -> "EngineConfig":
        data = json.loads(Path(path).read_text("utf-8"))
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def effective_threshold(self, strategy: str | None = None) -> float:
        if self.threshold is not None:
            return self.threshold
        return DEFAULT_THRESHOLDS[strategy or self.strategy]


@dataclass
class Reply:
    text: str
    provenance: str
    match: MatchResult | None = None
    matched_line_text: str | None = None


@dataclass
class Session:
    session_id: str
    strategy: str
    threshold: float
    transcript: list[tuple[str, str, str]] = field(default_factory=list)  # (speaker, text, ts)


def build_swap_map(pairs: list[tuple[str, str]]) -> dict[str, str]:
    """Bidirectional word map; on conflicts the earliest pair wins.

    The shipped table is not a bijection: "me" maps forward to "you",
    but "you" already maps back to "i" via the first pair, so the
    "you" -> "me" direction is shadowed.
    """
    swap: dict[str, str] = {}
    for a, b in pairs:
        swap.setdefault(a, b)
        swap.setdefault(b, a)
    return swap


DEFAULT_SWAP_MAP = build_swap_map(_load_pronoun_pairs(None))


def _match_case(original: str, replacement: str) -> str:
    if original.isupper() and len(original) > 1:
        return replacement.upper()
    if original[:1].isupper():
        return replacement.capitalize()
    return replacement


def pronoun_swap(text: str, swap_map: dict[str, str] | None = None) -> str:
    """Mirror a sentence by exchanging pronoun pairs.

    One left-to-right pass over the original words: each word is swapped
    at most once and outputs are never re-scanned, so "I am" becomes
    "You are", not a double-swapped muddle.  Case follows the replaced
    word; everything between words is untouched.
    """
    table = DEFAULT_SWAP_MAP if swap_map is None else swap_map
    out: list[str] = []
    pos = 0
    for i, ch in enumerate(text):
        if ch.isalpha() or ch == "'":
            continue
        if pos < i:
            out.append(_swap_word(text[pos:i], table))
        out.append(ch)
        pos = i + 1
    if pos < len(text):
        out.append(_swap_word(text[pos:], table))
    return "".join(out)


def _swap_word(word: str, table: dict[str, str]) -> str:
    replacement = table.get(word.lower())
    if replacement is None:
        return word
    return _match_case(word, replacement)


def learn_from_turn(session: Session) -> LearnedPair | None:
    """Candidate pair from the newest exchange: (bot B, user reply U).

    Needs a transcript of at least three entries ending in a user turn;
    skips blank replies and echoes (U equal to B).
    """
    transcript = session.transcript
    if len(transcript) < 3:
        return None
    last, prev = transcript[-1], transcript[-2]
    if last[0] != "user" or prev[0] != "bot":
        return None
    prompt, response = prev[1], last[1]
    if not response.strip() or response == prompt:
        return None
    return LearnedPair(
        prompt=prompt,
        response=response,
        session_id=session.session_id,
        created_at=last[2],
    )


def merged_search_domain(
    corpus: Corpus,
    learned: list[LearnedPair],
    stopwords: frozenset[str] | set[str] = DEFAULT_STOPWORDS,
    min_length: int = DEFAULT_MIN_LENGTH,
) -> SearchDomain:
    """Corpus prompt lines plus learned prompts, learned ids last.

    Ids for learned pairs start at corpus.n in insertion order, so the
    smallest-id tie-break prefers original corpus lines on equal scores.
    """
    return SearchDomain(
        corpus,
        [(pair.prompt, pair.response) for pair in learned],
        stopwords,
        min_length,
    )


class Engine:
    """Owns the corpus, learned pairs, and per-session conversations."""

    def __init__(
        self,
        corpus: Corpus,
        config: EngineConfig | None = None,
        knowledge: KnowledgeProvider | None = None,
    ):
        self.corpus = corpus
        self.config = config or EngineConfig()
        self.knowledge = knowledge
        self.stopwords = load_stopwords(self.config.stoplist_path)
        self.swap_map = build_swap_map(_load_pronoun_pairs(self.config.pronoun_table_path))
        self.index = build_index(corpus)
        self.learned: list[LearnedPair] = []
        if self.config.learned_path:
            self.learned = store_mod.load_learned(self.config.learned_path).pairs
        self._domain: SearchDomain | None = None
        self._lock = threading.RLock()
        self._sessions: dict[str, Session] = {}

    def session(self, session_id: str) -> Session:
        with self._lock:
            existing = self._sessions.get(session_id)
            if existing is None:
                existing = Session(
                    session_id=session_id,
                    strategy=self.config.strategy,
                    threshold=self.config.effective_threshold(),
                )
                self._sessions[session_id] = existing
            return existing

    def _merged_domain(self) -> SearchDomain:
        if self._domain is None:
            self._domain = merged_search_domain(
                self.corpus, self.learned, self.stopwords, self.config.min_length
            )
        return self._domain

    def _record(self, session: Session, speaker: str, text: str) -> str:
        ts = store_mod.now_rfc3339()
        session.transcript.append((speaker, text, ts))
        if self.config.sessions_dir:
            store_mod.append_transcript_entry(
                self.config.sessions_dir, session.session_id, speaker, text, ts
            )
        return ts

    def _learn(self, session: Session) -> None:
        pair = learn_from_turn(session)
        if pair is None:
            return
        self.learned.append(pair)
        self._domain = None
        if self.config.learned_path:
            store_mod.append_learned(pair, self.config.learned_path)

    def _passes_threshold(
        self, session: Session, query: str, match: MatchResult, matched_text: str
    ) -> bool:
        if match.strategy == "lev":
            longest = max(1, len(query.lower()), len(matched_text.lower()))
            return match.score / longest <= session.threshold
        return match.score <= session.threshold

    def respond(self, session: Session, user_text: str) -> Reply:
        """Run one turn: learn from the exchange, route, record the reply."""
        if not user_text.strip():
            raise ValueError("blank input")
        with self._lock:
            self._record(session, "user", user_text)
            self._learn(session)
            reply = self._route(session, user_text)
            self._record(session, "bot", reply.text)
            return reply

    def _route(self, session: Session, user_text: str) -> Reply:
        if self.knowledge is not None:
            kind = classify_query(user_text)
            if kind is not None:
                answer = lookup(self.knowledge, kind)
                if answer is not None:
                    return Reply(text=answer, provenance=PROVENANCE_KNOWLEDGE)

        domain = self._merged_domain()
        match = best_match(
            user_text,
            domain,
            strategy=session.strategy,
            mode=self.config.mode,
            workers=self.config.workers,
            index=self.index,
            stopwords=self.stopwords,
            min_length=self.config.min_length,
        )
        if match is not None:
            matched_text = domain.prompt_text(match.line_id)
            if self._passes_threshold(session, user_text, match, matched_text):
                provenance = (
                    PROVENANCE_LEARNED
                    if domain.is_extra(match.line_id)
                    else PROVENANCE_CORPUS
                )
                return Reply(
                    text=domain.reply_text(match.line_id),
                    provenance=provenance,
                    match=match,
                    matched_line_text=matched_text,
                )
        return Reply(
            text=pronoun_swap(user_text, self.swap_map), provenance=PROVENANCE_PRONOUN
        )

    def stats(self) -> dict:
        with self._lock:
            return {
                "corpus_lines": self.corpus.n,
                "learned_pairs": len(self.learned),
                "episodes": len(self.corpus.episode_offsets),
                "strategy": self.config.strategy,
                "threshold": self.config.effective_threshold(),
            }
