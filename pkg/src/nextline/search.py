"""Nearest-line search over the corpus.

Finds the corpus line (with a successor reply) closest to a query under
a strategy: ``lev`` (character edit distance on lowercased raw text) or
``bow-l1``/``bow-l2`` (normalized term-vector distance).  Search scans
either every eligible line (exhaustive) or only inverted-index
candidates (indexed; bag-of-words strategies only).

Scoring is batched with numpy.  The bag-of-words kernel uses the same
cross-multiplied integer arithmetic as ``bow_distance`` — every
intermediate value is an exact integer, so scores are bit-identical
across modes, worker counts, and the scalar reference.  The Levenshtein
kernel runs the classic DP row-by-row over the query, vectorized across
a block of lines; the in-row dependency is resolved with a prefix-min
(``new[j] = min over k≤j of (T[k] + j - k)``).  Blocks of very long
lines enlarge the working set, since each block is padded to its
longest member.
"""

from __future__ import annotations

import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from nextline.corpus import Corpus, EmptyCorpusError
from nextline.textprep import (
    DEFAULT_MIN_LENGTH,
    DEFAULT_STOPWORDS,
    TermVector,
    preprocess,
)

STRATEGIES = ("lev", "bow-l1", "bow-l2")
MODES = ("exhaustive", "indexed")

_LEV_BLOCK = 4096
_build_lock = threading.Lock()


@dataclass(frozen=True)
class MatchResult:
    line_id: int
    score: float
    strategy: str


@dataclass
class InvertedIndex:
    """Token -> ascending, duplicate-free ids of lines containing it.

    Only lines with a successor reply are posted.  ``empty_line_ids``
    lists reply-bearing lines whose term vector is empty; they carry no
    postings but can still outscore non-overlapping candidates (distance
    1.0 vs 2.0), so indexed search always includes them to stay
    result-identical with the exhaustive scan.
    """

    postings: dict[str, list[int]]
    empty_line_ids: list[int]


def build_index(corpus: Corpus) -> InvertedIndex:
    postings: dict[str, list[int]] = {}
    empty_ids: list[int] = []
    for line in corpus.lines:
        if not corpus.has_reply(line.id):
            continue
        if not line.vector:
            empty_ids.append(line.id)
            continue
        for token in line.vector:
            postings.setdefault(token, []).append(line.id)
    return InvertedIndex(postings=postings, empty_line_ids=empty_ids)


def candidate_lines(index: InvertedIndex, query_vector: TermVector) -> list[int]:
    """Sorted duplicate-free union of the query tokens' posting lists."""
    ids: set[int] = set()
    for token in query_vector:
        ids.update(index.postings.get(token, ()))
    return sorted(ids)


class _Segment:
    """Search-ready arrays for one contiguous run of domain lines."""

    def __init__(self, ids: list[int], texts: list[str], vectors: list[TermVector]):
        self.ids = np.asarray(ids, dtype=np.int64)
        self.texts = texts
        self.vectors = vectors
        self._lock = threading.Lock()
        self._lev: tuple | None = None
        self._bow: dict | None = None

    def lev_arrays(self) -> tuple:
        """(codes, offsets, lengths): lowercased texts as one code array."""
        with self._lock:
            if self._lev is None:
                lowered = [t.lower() for t in self.texts]
                lens = np.fromiter(
                    (len(t) for t in lowered), dtype=np.int32, count=len(lowered)
                )
                offs = np.zeros(len(lowered) + 1, dtype=np.int64)
                np.cumsum(lens, out=offs[1:])
                codes = np.empty(int(offs[-1]), dtype=np.int32)
                for i, text in enumerate(lowered):
                    if text:
                        codes[offs[i] : offs[i + 1]] = np.frombuffer(
                            text.encode("utf-32-le"), dtype="<u4"
                        ).astype(np.int32)
                self._lev = (codes, offs, lens)
            return self._lev

    def bow_arrays(self) -> dict:
        """Per-line term counts flattened into CSR-style arrays."""
        with self._lock:
            if self._bow is None:
                vocab: dict[str, int] = {}
                tok: list[int] = []
                cnt: list[float] = []
                offs = np.zeros(len(self.vectors) + 1, dtype=np.int64)
                su = np.zeros(len(self.vectors), dtype=np.float64)
                l2sq = np.zeros(len(self.vectors), dtype=np.float64)
                for i, vec in enumerate(self.vectors):
                    for term, count in vec.items():
                        tok.append(vocab.setdefault(term, len(vocab)))
                        cnt.append(count)
                    offs[i + 1] = len(tok)
                    su[i] = sum(vec.values())
                    l2sq[i] = sum(c * c for c in vec.values())
                cnt_arr = np.asarray(cnt, dtype=np.float64)
                self._bow = {
                    "vocab": vocab,
                    "tok": np.asarray(tok, dtype=np.int64),
                    "cnt": cnt_arr,
                    "su_elem": np.repeat(su, np.diff(offs)),
                    "offsets": offs,
                    "su": su,
                    "l2sq": l2sq,
                }
            return self._bow


class SearchDomain:
    """Corpus prompt lines plus appended (prompt, response) extras.

    Extras get ids after all corpus ids, in insertion order, so the
    smallest-id tie-break prefers original corpus lines.
    """

    def __init__(
        self,
        corpus: Corpus,
        extras: list[tuple[str, str]],
        stopwords: frozenset[str] | set[str] = DEFAULT_STOPWORDS,
        min_length: int = DEFAULT_MIN_LENGTH,
    ):
        self.corpus = corpus
        self.extras = list(extras)
        self.stopwords = stopwords
        self.min_length = min_length
        base = corpus.n
        if self.extras:
            prompts = [p for p, _ in self.extras]
            self._extra_segment = _Segment(
                ids=[base + k for k in range(len(self.extras))],
                texts=prompts,
                vectors=[preprocess(p, stopwords, min_length) for p in prompts],
            )
        else:
            self._extra_segment = None

    def segments(self) -> list[_Segment]:
        segs = [_corpus_segment(self.corpus)]
        if self._extra_segment is not None:
            segs.append(self._extra_segment)
        return segs

    def searchable_ids(self) -> list[int]:
        """Ids of every line a query can match, in ascending order."""
        ids: list[int] = []
        for seg in self.segments():
            ids.extend(seg.ids)
        return ids

    def is_extra(self, line_id: int) -> bool:
        return line_id >= self.corpus.n

    def prompt_text(self, line_id: int) -> str:
        if self.is_extra(line_id):
            return self.extras[line_id - self.corpus.n][0]
        return self.corpus.lines[line_id].text

    def reply_text(self, line_id: int) -> str:
        if self.is_extra(line_id):
            return self.extras[line_id - self.corpus.n][1]
        return self.corpus.reply_text(line_id)


def _corpus_segment(corpus: Corpus) -> _Segment:
    with _build_lock:
        seg = corpus._search_cache.get("segment")
        if seg is None:
            ids = [line.id for line in corpus.lines if corpus.has_reply(line.id)]
            seg = _Segment(
                ids=ids,
                texts=[corpus.lines[i].text for i in ids],
                vectors=[corpus.lines[i].vector for i in ids],
            )
            corpus._search_cache["segment"] = seg
        return seg


def _corpus_index(corpus: Corpus) -> InvertedIndex:
    with _build_lock:
        index = corpus._search_cache.get("index")
        if index is None:
            index = build_index(corpus)
            corpus._search_cache["index"] = index
        return index


def _segment_sums(values: np.ndarray, bounds: np.ndarray) -> np.ndarray:
    """Sum ``values`` within consecutive ``bounds`` slices.

    Safe on exact-integer data only: prefix sums never round, so the
    result equals a direct per-slice sum regardless of packing.
    """
    prefix = np.zeros(len(values) + 1, dtype=np.float64)
    np.cumsum(values, out=prefix[1:])
    return prefix[bounds[1:]] - prefix[bounds[:-1]]


def _bow_scores(seg: _Segment, rows: np.ndarray, qv: TermVector, norm: str) -> np.ndarray:
    bow = seg.bow_arrays()
    dense = np.zeros(len(bow["vocab"]) + 1, dtype=np.float64)
    for term, count in qv.items():
        slot = bow["vocab"].get(term)
        if slot is not None:
            dense[slot] = count

    starts = bow["offsets"][rows]
    lens = (bow["offsets"][rows + 1] - starts).astype(np.int64)
    bounds = np.zeros(len(rows) + 1, dtype=np.int64)
    np.cumsum(lens, out=bounds[1:])
    take = np.repeat(starts - bounds[:-1], lens) + np.arange(int(bounds[-1]), dtype=np.int64)
    etok = bow["tok"][take]
    ecnt = bow["cnt"][take]
    qg = dense[etok]

    if norm == "l1":
        qs = float(sum(qv.values()))
        su_rows = bow["su"][rows]
        if qs == 0.0:
            return np.where(su_rows == 0.0, 0.0, 1.0)
        esu = bow["su_elem"][take]
        num = _segment_sums(np.abs(ecnt * qs - qg * esu), bounds)
        num += (qs - _segment_sums(qg, bounds)) * su_rows
        denom = np.where(su_rows == 0.0, 1.0, su_rows * qs)
        return np.where(su_rows == 0.0, 1.0, num / denom)

    q2 = float(sum(c * c for c in qv.values()))
    l2_rows = seg.bow_arrays()["l2sq"][rows]
    if q2 == 0.0:
        return np.where(l2_rows == 0.0, 0.0, 1.0)
    dot = _segment_sums(ecnt * qg, bounds)
    denom = np.where(l2_rows == 0.0, 1.0, np.sqrt(l2_rows * q2))
    scores = np.sqrt(np.maximum(0.0, 2.0 - 2.0 * dot / denom))
    return np.where(l2_rows == 0.0, 1.0, scores)


def _bow_piece_best(seg: _Segment, rows: np.ndarray, qv: TermVector, norm: str):
    scores = _bow_scores(seg, rows, qv, norm)
    j = int(np.argmin(scores))
    return float(scores[j]), int(seg.ids[rows[j]])


def _lev_piece_best(seg: _Segment, rows: np.ndarray, q_codes: np.ndarray):
    """Best (score, line_id) over one ascending run of rows.

    Prunes lines whose length difference already reaches the running
    best, and abandons lines whose DP row minimum reaches it (row minima
    never decrease).  Both cuts only discard lines that cannot strictly
    beat an earlier-id best, so the smallest-id tie-break is preserved.
    """
    codes, offs, lens = seg.lev_arrays()
    m = len(q_codes)
    best = math.inf
    best_id = -1
    for start in range(0, len(rows), _LEV_BLOCK):
        block = rows[start : start + _LEV_BLOCK]
        keep = np.abs(lens[block] - m) < best
        block = block[keep]
        if not len(block):
            continue
        bl = lens[block].astype(np.int64)
        rid = seg.ids[block]
        width = int(bl.max())
        cols = np.arange(width, dtype=np.int64)
        gather = offs[block][:, None] + cols[None, :]
        np.minimum(gather, len(codes) - 1 if len(codes) else 0, out=gather)
        enc = np.where(cols[None, :] < bl[:, None], codes[gather], np.int32(-1))

        jidx = np.arange(width + 1, dtype=np.int32)
        dp = np.tile(jidx, (len(block), 1))
        tmp = np.empty_like(dp)
        for i in range(m):
            cost = (enc != q_codes[i]).astype(np.int32)
            tmp[:, 0] = i + 1
            np.minimum(dp[:, 1:] + 1, dp[:, :-1] + cost, out=tmp[:, 1:])
            np.subtract(tmp, jidx, out=tmp)
            np.minimum.accumulate(tmp, axis=1, out=tmp)
            np.add(tmp, jidx, out=tmp)
            dp, tmp = tmp, dp
            if best is not math.inf and (i & 3) == 3:
                alive = dp.min(axis=1) < best
                if not alive.all():
                    if not alive.any():
                        dp = None
                        break
                    dp = dp[alive]
                    tmp = tmp[alive]
                    enc = enc[alive]
                    bl = bl[alive]
                    rid = rid[alive]
        if dp is None or not len(dp):
            continue
        scores = dp[np.arange(len(bl)), bl]
        j = int(np.argmin(scores))
        if scores[j] < best:
            best = int(scores[j])
            best_id = int(rid[j])
        if best == 0:
            break
    return best, best_id


def _merge_sorted_unique(a: list[int], b: list[int]) -> np.ndarray:
    if not b:
        return np.asarray(a, dtype=np.int64)
    return np.union1d(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))


def best_match(
    query: str,
    domain: Corpus | SearchDomain,
    strategy: str = "lev",
    mode: str = "exhaustive",
    workers: int = 1,
    index: InvertedIndex | None = None,
    stopwords: frozenset[str] | set[str] = DEFAULT_STOPWORDS,
    min_length: int = DEFAULT_MIN_LENGTH,
) -> MatchResult | None:
    """Closest line (with a reply) to ``query`` under the strategy.

    Ties break to the smallest line id.  The search domain is
    partitioned into ascending runs, per-partition minima are reduced by
    (score, line_id), so the result is identical for every worker count.
    Indexed mode applies only to bag-of-words strategies; with no index
    candidates at all it falls back to the exhaustive scan, keeping the
    two modes result-equivalent.  Returns None when the domain has no
    searchable line; an empty corpus raises EmptyCorpusError.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy: {strategy!r}")
    if mode not in MODES:
        raise ValueError(f"unknown mode: {mode!r}")
    if workers < 1:
        raise ValueError("workers must be >= 1")

    if isinstance(domain, Corpus):
        if domain.n == 0:
            raise EmptyCorpusError("cannot search an empty corpus")
        corpus = domain
        segments = [_corpus_segment(domain)]
    else:
        corpus = domain.corpus
        segments = domain.segments()
    if sum(len(seg.ids) for seg in segments) == 0:
        return None

    qv = preprocess(query, stopwords, min_length)

    selections: list[tuple[_Segment, np.ndarray]] = []
    corpus_seg = segments[0]
    use_index = mode == "indexed" and strategy != "lev" and corpus.n > 0
    if use_index:
        if index is None:
            index = _corpus_index(corpus)
        cand = candidate_lines(index, qv)
        if cand:
            ids = _merge_sorted_unique(cand, index.empty_line_ids)
            rows = np.searchsorted(corpus_seg.ids, ids)
            selections.append((corpus_seg, rows))
        else:
            use_index = False
    if not use_index:
        selections.append((corpus_seg, np.arange(len(corpus_seg.ids), dtype=np.int64)))
    for seg in segments[1:]:
        selections.append((seg, np.arange(len(seg.ids), dtype=np.int64)))

    if strategy == "lev":
        q_codes = np.frombuffer(query.lower().encode("utf-32-le"), dtype="<u4").astype(
            np.int32
        )
        for seg, rows in selections:
            if len(rows):
                seg.lev_arrays()

        def run(seg: _Segment, rows: np.ndarray):
            return _lev_piece_best(seg, rows, q_codes)

    else:
        bow_norm = "l1" if strategy == "bow-l1" else "l2"
        for seg, rows in selections:
            if len(rows):
                seg.bow_arrays()

        def run(seg: _Segment, rows: np.ndarray):
            return _bow_piece_best(seg, rows, qv, bow_norm)

    pieces = []
    for seg, rows in selections:
        for part in np.array_split(rows, workers):
            if len(part):
                pieces.append((seg, part))
    if not pieces:
        return None

    if workers == 1 or len(pieces) == 1:
        results = [run(seg, rows) for seg, rows in pieces]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run, seg, rows) for seg, rows in pieces]
            results = [f.result() for f in futures]

    best_score, best_id = math.inf, -1
    for score, line_id in results:
        if line_id < 0:
            continue
        if score < best_score or (score == best_score and line_id < best_id):
            best_score, best_id = score, line_id
    if best_id < 0:
        return None
    if strategy == "lev":
        return MatchResult(line_id=best_id, score=int(best_score), strategy=strategy)
    return MatchResult(line_id=best_id, score=float(best_score), strategy=strategy)
