"""File-backed persistence: corpus snapshots, learned pairs, transcripts.

Everything is JSON-lines.  The corpus snapshot is versioned and
byte-stable (same corpus, same bytes); the learned-pair file is
append-only so a crash can at worst leave one truncated trailing line,
which the loader skips while counting a warning.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from nextline.corpus import Corpus, DialogueLine, EmptyCorpusError
from nextline.textprep import DEFAULT_MIN_LENGTH, DEFAULT_STOPWORDS, preprocess

CORPUS_FORMAT = "corpus-v1"


class CorpusFormatError(ValueError):
    """Corpus file is missing or violates the corpus-v1 layout."""

    def __init__(self, message: str, byte_offset: int):
        super().__init__(f"byte {byte_offset}: {message}")
        self.byte_offset = byte_offset


@dataclass(frozen=True)
class LearnedPair:
    prompt: str
    response: str
    session_id: str
    created_at: str  # RFC 3339


@dataclass
class LearnedLoad:
    pairs: list[LearnedPair] = field(default_factory=list)
    skipped: int = 0


def now_rfc3339() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write the corpus-v1 snapshot: a header line, then one line per id."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        header = {"format": CORPUS_FORMAT, "episodes": corpus.episode_offsets}
        fh.write(json.dumps(header, ensure_ascii=False) + "\n")
        for line in corpus.lines:
            record = {"id": line.id, "episode": line.episode, "text": line.text}
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def load_corpus(
    path: str | Path,
    stopwords: frozenset[str] | set[str] = DEFAULT_STOPWORDS,
    min_length: int = DEFAULT_MIN_LENGTH,
) -> Corpus:
    """Read a corpus-v1 snapshot; term vectors are recomputed on load.

    Raises CorpusFormatError (with the byte offset of the offending
    line) on a bad header, malformed record, or non-contiguous ids, and
    EmptyCorpusError when the snapshot holds no lines.
    """
    data = Path(path).read_bytes()
    offset = 0
    header = None
    lines: list[DialogueLine] = []
    expected_id = 0
    for chunk in data.split(b"\n"):
        if not chunk.strip():
            offset += len(chunk) + 1
            continue
        try:
            record = json.loads(chunk.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise CorpusFormatError(f"unreadable record: {exc}", offset) from exc
        if header is None:
            if not isinstance(record, dict) or record.get("format") != CORPUS_FORMAT:
                raise CorpusFormatError(
                    f"expected a {CORPUS_FORMAT} header, got {record!r}", offset
                )
            header = record
        else:
            try:
                line_id, episode, text = record["id"], record["episode"], record["text"]
            except (TypeError, KeyError) as exc:
                raise CorpusFormatError(f"line record missing field: {exc}", offset) from exc
            if line_id != expected_id:
                raise CorpusFormatError(
                    f"ids must be contiguous: expected {expected_id}, got {line_id}", offset
                )
            lines.append(
                DialogueLine(
                    id=line_id,
                    text=text,
                    episode=episode,
                    vector=preprocess(text, stopwords, min_length),
                )
            )
            expected_id += 1
        offset += len(chunk) + 1
    if header is None:
        raise CorpusFormatError("empty file, no header", 0)
    if not lines:
        raise EmptyCorpusError(f"{path}: snapshot holds no lines")
    return Corpus(lines=lines, episode_offsets=list(header["episodes"]))


def append_learned(pair: LearnedPair, path: str | Path) -> None:
    """Append one pair as a JSON line; existing bytes are never touched."""
    record = {
        "prompt": pair.prompt,
        "response": pair.response,
        "session_id": pair.session_id,
        "created_at": pair.created_at,
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(record, ensure_ascii=False) + "\n")
        fh.flush()


def load_learned(path: str | Path) -> LearnedLoad:
    """Load pairs in append order; a missing file is an empty list.

    Unreadable lines (a truncated tail after a crash, mid-file
    corruption) are skipped and counted in ``skipped``; every readable
    pair still loads.
    """
    result = LearnedLoad()
    path = Path(path)
    if not path.exists():
        return result
    for raw in path.read_bytes().split(b"\n"):
        if not raw.strip():
            continue
        try:
            record = json.loads(raw.decode("utf-8"))
            pair = LearnedPair(
                prompt=record["prompt"],
                response=record["response"],
                session_id=record["session_id"],
                created_at=record["created_at"],
            )
        except (UnicodeDecodeError, json.JSONDecodeError, KeyError, TypeError):
            result.skipped += 1
            continue
        result.pairs.append(pair)
    return result


_UNSAFE_ID_RE = re.compile(r"[^A-Za-z0-9_-]")


def _session_file(sessions_dir: str | Path, session_id: str) -> Path:
    safe = _UNSAFE_ID_RE.sub("_", session_id) or "session"
    return Path(sessions_dir) / f"{safe}.jsonl"


def append_transcript_entry(
    sessions_dir: str | Path, session_id: str, speaker: str, text: str, ts: str
) -> None:
    path = _session_file(sessions_dir, session_id)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a", encoding="utf-8", newline="\n") as fh:
        fh.write(
            json.dumps(
                {"speaker": speaker, "text": text, "ts": ts}, ensure_ascii=False
            )
            + "\n"
        )


def load_transcript(sessions_dir: str | Path, session_id: str) -> list[tuple[str, str, str]]:
    path = _session_file(sessions_dir, session_id)
    if not path.exists():
        return []
    entries: list[tuple[str, str, str]] = []
    for raw in path.read_text("utf-8").splitlines():
        if not raw.strip():
            continue
        record = json.loads(raw)
        entries.append((record["speaker"], record["text"], record["ts"]))
    return entries
