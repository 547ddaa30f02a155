"""SRT subtitle parsing and noise removal.

A subtitle file is a sequence of blocks: a numeric cue index, a
``HH:MM:SS,mmm --> HH:MM:SS,mmm`` timing line, one or more payload
lines, and a blank-line terminator.  Parsing keeps everything; cleaning
then drops the non-dialogue noise (stage directions, music lines,
speaker labels) so only spoken text reaches the corpus.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_TIMING_RE = re.compile(
    r"^\s*(\d{2}):(\d{2}):(\d{2}),(\d{3})\s*-->\s*(\d{2}):(\d{2}):(\d{2}),(\d{3})\s*$"
)
_TAG_RE = re.compile(r"<[^>]*>|\{[^}]*\}")
# An all-uppercase token (letters, digits, apostrophes, hyphens) followed
# by a colon at the start of a line, e.g. "JOEY:" or "MAN-2:".
_SPEAKER_RE = re.compile(r"^[A-Z][A-Z0-9'\-]*:\s*")
_WS_RE = re.compile(r"\s+")


class SrtParseError(ValueError):
    """Malformed SRT input; ``line_no`` is 1-based within the file."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class SubtitleCue:
    """One parsed subtitle block."""

    index: int
    start: int  # milliseconds from zero
    end: int  # milliseconds from zero
    lines: tuple[str, ...]


def _timestamp_ms(h: str, m: str, s: str, ms: str) -> int:
    return ((int(h) * 60 + int(m)) * 60 + int(s)) * 1000 + int(ms)


def parse_srt(raw: str) -> list[SubtitleCue]:
    """Parse SRT text into cues, in file order.

    Accepts LF or CRLF endings and an optional leading byte-order mark.
    Raises SrtParseError (with a 1-based line number) on a non-numeric
    or non-positive cue index, a malformed timing line, a timing range
    running backwards, or a block with no payload.
    """
    if raw.startswith("﻿"):
        raw = raw[1:]
    lines = [line.rstrip("\r") for line in raw.split("\n")]

    cues: list[SubtitleCue] = []
    pos = 0
    total = len(lines)
    while True:
        while pos < total and not lines[pos].strip():
            pos += 1
        if pos >= total:
            return cues

        index_line = lines[pos].strip()
        try:
            index = int(index_line)
        except ValueError:
            raise SrtParseError(f"cue index is not a number: {index_line!r}", pos + 1)
        if index <= 0:
            raise SrtParseError(f"cue index must be positive: {index}", pos + 1)
        pos += 1

        if pos >= total:
            raise SrtParseError("file ends before the timing line", pos + 1)
        match = _TIMING_RE.match(lines[pos])
        if match is None:
            raise SrtParseError(f"malformed timing line: {lines[pos]!r}", pos + 1)
        start = _timestamp_ms(*match.group(1, 2, 3, 4))
        end = _timestamp_ms(*match.group(5, 6, 7, 8))
        if start > end:
            raise SrtParseError(f"cue ends before it starts: {lines[pos]!r}", pos + 1)
        pos += 1

        payload: list[str] = []
        while pos < total and lines[pos].strip():
            payload.append(lines[pos])
            pos += 1
        if not payload:
            raise SrtParseError("cue has no payload lines", pos + 1)

        cues.append(SubtitleCue(index=index, start=start, end=end, lines=tuple(payload)))


def cue_to_srt(cue: SubtitleCue) -> str:
    """Render a cue back to its SRT block form (with trailing blank line)."""

    def fmt(ms: int) -> str:
        s, msec = divmod(ms, 1000)
        m, sec = divmod(s, 60)
        h, minute = divmod(m, 60)
        return f"{h:02d}:{minute:02d}:{sec:02d},{msec:03d}"

    body = "\n".join(cue.lines)
    return f"{cue.index}\n{fmt(cue.start)} --> {fmt(cue.end)}\n{body}\n\n"


def _is_noise(text: str) -> bool:
    if not text:
        return True
    if text.startswith("♪"):
        return True
    if text.startswith("[") and text.endswith("]"):
        return True
    if text.startswith("(") and text.endswith(")"):
        return True
    return False


def clean_cues(cues: list[SubtitleCue]) -> list[str]:
    """Reduce cues to spoken utterances.

    Payload lines are joined with a single space and ``<...>``/``{...}``
    markup is removed.  A cue is dropped when the joined text is blank,
    fully enclosed in brackets or parentheses, or starts with "♪".  A
    leading uppercase ``NAME:`` speaker label is stripped, and the drop
    rules are re-applied to whatever remains.
    """
    kept: list[str] = []
    for cue in cues:
        text = " ".join(part.strip() for part in cue.lines)
        text = _TAG_RE.sub("", text)
        text = _WS_RE.sub(" ", text).strip()
        if _is_noise(text):
            continue
        stripped = _SPEAKER_RE.sub("", text).strip()
        if _is_noise(stripped):
            continue
        kept.append(stripped)
    return kept
