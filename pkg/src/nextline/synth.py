"""Seeded synthetic subtitle corpora for experiments and benchmarks.

Generates episode ``.srt`` files with a given number of dialogue lines
plus a sprinkle (~2%) of noise cues — stage directions, music lines —
that the cleaner is expected to drop, and occasional markup (italic
tags, speaker labels, split payloads) that it is expected to strip.
The same seed always produces byte-identical files.
"""

from __future__ import annotations

import random
from pathlib import Path

# Common short/function words mixed in for realistic filtering.
_COMMON_WORDS = (
    "a an on in it is to of the are you we they i me my your this that "
    "was not but so oh no yes well okay right now here just what how"
).split()

_NOISE_BRACKETED = (
    "[door opens]",
    "[phone rings]",
    "[crowd cheering]",
    "[sighs]",
    "(laughter)",
    "(applause)",
    "( indistinct chatter )",
)

_SPEAKERS = ("ALEX", "SAM", "RILEY", "JO", "MAX", "DREW")

_CONSONANTS = "bcdfghjklmnpqrstvwz"
_VOWELS = "aeiou"
_SUFFIXES = ("", "", "", "", "ing", "ed", "s", "ly", "tion", "ness")


def build_vocabulary(size: int, rng: random.Random) -> list[str]:
    """Distinct pronounceable words, syllable-built with inflections."""
    words: list[str] = []
    seen: set[str] = set(_COMMON_WORDS)
    while len(words) < size:
        syllables = rng.randint(2, 4)
        stem = "".join(
            rng.choice(_CONSONANTS) + rng.choice(_VOWELS) for _ in range(syllables)
        )
        word = stem + rng.choice(_SUFFIXES)
        if word not in seen:
            seen.add(word)
            words.append(word)
    return words


def _sentence(vocab: list[str], rng: random.Random) -> str:
    count = rng.randint(4, 12)
    picked = [
        rng.choice(_COMMON_WORDS) if rng.random() < 0.15 else rng.choice(vocab)
        for _ in range(count)
    ]
    text = " ".join(picked)
    return text[0].upper() + text[1:] + rng.choice(".....??!")


def _format_ts(ms: int) -> str:
    s, msec = divmod(ms, 1000)
    m, sec = divmod(s, 60)
    h, minute = divmod(m, 60)
    return f"{h:02d}:{minute:02d}:{sec:02d},{msec:03d}"


def generate_corpus_files(
    out_dir: str | Path,
    lines: int,
    vocab: int = 5000,
    seed: int = 0,
    episodes: int | None = None,
) -> dict:
    """Write episode SRT files totalling exactly ``lines`` dialogue cues.

    Returns a summary dict: files written, dialogue lines, noise cues.
    """
    if lines <= 0:
        raise ValueError("lines must be positive")
    if vocab <= 0:
        raise ValueError("vocab must be positive")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)
    words = build_vocabulary(vocab, rng)

    episode_count = episodes if episodes is not None else max(1, lines // 500)
    episode_count = min(episode_count, lines)
    base, extra = divmod(lines, episode_count)
    noise_total = 0

    for ep in range(episode_count):
        ep_lines = base + (1 if ep < extra else 0)
        blocks: list[str] = []
        cue_index = 0
        clock = 0

        def emit(payload: list[str]) -> None:
            nonlocal cue_index, clock
            cue_index += 1
            start = clock + rng.randint(200, 1500)
            end = start + rng.randint(1000, 3500)
            clock = end
            body = "\n".join(payload)
            blocks.append(
                f"{cue_index}\n{_format_ts(start)} --> {_format_ts(end)}\n{body}\n"
            )

        for _ in range(ep_lines):
            if rng.random() < 0.02:
                noise_total += 1
                roll = rng.random()
                if roll < 0.6:
                    emit([rng.choice(_NOISE_BRACKETED)])
                else:
                    emit(["♪ " + " ".join(rng.choice(words) for _ in range(3)) + " ♪"])
            sentence = _sentence(words, rng)
            styled = sentence
            roll = rng.random()
            if roll < 0.12:
                styled = f"<i>{sentence}</i>"
            elif roll < 0.17:
                styled = f"{rng.choice(_SPEAKERS)}: {sentence}"
            cut = -1
            if rng.random() < 0.12:
                cut = styled.rfind(" ", 0, len(styled) // 2 + 1)
                if cut == -1:
                    cut = styled.find(" ")
            if cut > 0:
                emit([styled[:cut], styled[cut + 1 :]])
            else:
                emit([styled])

        path = out / f"ep{ep + 1:03d}.srt"
        path.write_text("\n".join(blocks) + "\n", encoding="utf-8", newline="\n")

    return {
        "files": episode_count,
        "dialogue_lines": lines,
        "noise_cues": noise_total,
        "out_dir": str(out),
    }


def sample_queries(texts: list[str], count: int, seed: int = 0) -> list[str]:
    """Seeded benchmark queries: corpus lines, some lightly perturbed."""
    if not texts:
        raise ValueError("no texts to sample from")
    rng = random.Random(seed)
    queries: list[str] = []
    for _ in range(count):
        text = rng.choice(texts)
        roll = rng.random()
        if roll < 0.4 and len(text) > 3:
            pos = rng.randrange(len(text))
            text = text[:pos] + rng.choice("abcdefghij") + text[pos + 1 :]
        elif roll < 0.7 and text.count(" ") > 1:
            parts = text.split(" ")
            parts.pop(rng.randrange(len(parts)))
            text = " ".join(parts)
        queries.append(text)
    return queries
