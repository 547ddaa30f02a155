"""Strategy/mode benchmark harness.

Times best_match across every requested (strategy, mode, workers)
combination over a query set, but only after proving that indexed and
exhaustive search return identical results on those queries —
correctness precedes timing.  Levenshtein has no indexed variant, so
those combinations are skipped.
"""

from __future__ import annotations

import json
import math
import os
import platform
import time
from dataclasses import dataclass, field

import numpy as np

from nextline.corpus import Corpus
from nextline.search import (
    MODES,
    STRATEGIES,
    best_match,
    build_index,
    _corpus_segment,
)
from nextline.textprep import DEFAULT_MIN_LENGTH, DEFAULT_STOPWORDS


class EquivalenceError(RuntimeError):
    """Indexed and exhaustive search disagreed; carries example diffs."""

    def __init__(self, strategy: str, diffs: list[str], total: int):
        preview = "\n".join(diffs[:5])
        super().__init__(
            f"{strategy}: indexed and exhaustive results differ on "
            f"{total} of the queries:\n{preview}"
        )
        self.strategy = strategy
        self.diffs = diffs


@dataclass
class BenchRow:
    strategy: str
    mode: str
    workers: int
    queries: int
    mean_ms: float
    p95_ms: float
    build_ms: float


@dataclass
class BenchReport:
    environment: str
    rows: list[BenchRow] = field(default_factory=list)
    ratios: dict[str, float] = field(default_factory=dict)


def _environment_note() -> str:
    return (
        f"{platform.platform()}; python {platform.python_version()}; "
        f"numpy {np.__version__}; {os.cpu_count()} cpus"
    )


def _percentile95(times_ms: list[float]) -> float:
    ordered = sorted(times_ms)
    rank = max(0, math.ceil(0.95 * len(ordered)) - 1)
    return ordered[rank]


def run_bench(
    corpus: Corpus,
    queries: list[str],
    strategies: list[str],
    modes: list[str],
    workers_list: list[int],
    stopwords: frozenset[str] | set[str] = DEFAULT_STOPWORDS,
    min_length: int = DEFAULT_MIN_LENGTH,
) -> BenchReport:
    if not queries:
        raise ValueError("queries must be non-empty")
    for strategy in strategies:
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy: {strategy!r}")
    for mode in modes:
        if mode not in MODES:
            raise ValueError(f"unknown mode: {mode!r}")
    if not workers_list or any(w < 1 for w in workers_list):
        raise ValueError("workers must be positive")

    combos = [
        (strategy, mode)
        for strategy in strategies
        for mode in modes
        if not (strategy == "lev" and mode == "indexed")
    ]
    report = BenchReport(environment=_environment_note())

    # One-time structure builds, timed separately from per-query scans.
    segment = _corpus_segment(corpus)
    bow_build_ms = lev_build_ms = index_build_ms = 0.0
    if any(s != "lev" for s, _ in combos):
        started = time.perf_counter()
        segment.bow_arrays()
        bow_build_ms = (time.perf_counter() - started) * 1000.0
    if any(s == "lev" for s, _ in combos):
        started = time.perf_counter()
        segment.lev_arrays()
        lev_build_ms = (time.perf_counter() - started) * 1000.0
    index = None
    if any(m == "indexed" for _, m in combos):
        started = time.perf_counter()
        index = build_index(corpus)
        index_build_ms = (time.perf_counter() - started) * 1000.0

    def search(query: str, strategy: str, mode: str, workers: int):
        return best_match(
            query,
            corpus,
            strategy=strategy,
            mode=mode,
            workers=workers,
            index=index,
            stopwords=stopwords,
            min_length=min_length,
        )

    # Correctness gate: indexed must reproduce exhaustive exactly.
    for strategy in strategies:
        if strategy == "lev" or "indexed" not in modes or "exhaustive" not in modes:
            continue
        diffs: list[str] = []
        for query in queries:
            exhaustive = search(query, strategy, "exhaustive", 1)
            indexed = search(query, strategy, "indexed", 1)
            ex_key = (exhaustive.line_id, exhaustive.score) if exhaustive else None
            ix_key = (indexed.line_id, indexed.score) if indexed else None
            if ex_key != ix_key:
                diffs.append(f"  {query!r}: exhaustive={ex_key} indexed={ix_key}")
        if diffs:
            raise EquivalenceError(strategy, diffs, len(diffs))

    for strategy, mode in combos:
        if strategy == "lev":
            build_ms = lev_build_ms
        elif mode == "indexed":
            build_ms = bow_build_ms + index_build_ms
        else:
            build_ms = bow_build_ms
        for workers in workers_list:
            search(queries[0], strategy, mode, workers)  # warm-up, untimed
            times_ms: list[float] = []
            for query in queries:
                started = time.perf_counter()
                search(query, strategy, mode, workers)
                times_ms.append((time.perf_counter() - started) * 1000.0)
            report.rows.append(
                BenchRow(
                    strategy=strategy,
                    mode=mode,
                    workers=workers,
                    queries=len(queries),
                    mean_ms=sum(times_ms) / len(times_ms),
                    p95_ms=_percentile95(times_ms),
                    build_ms=build_ms,
                )
            )

    _fill_ratios(report, workers_list[0])
    return report


def _fill_ratios(report: BenchReport, workers: int) -> None:
    """Record how much slower Levenshtein search runs than bag-of-words."""
    by_key = {
        (r.strategy, r.mode): r.mean_ms
        for r in report.rows
        if r.workers == workers
    }
    lev = by_key.get(("lev", "exhaustive"))
    if lev is None:
        return
    for mode in MODES:
        bow = by_key.get(("bow-l1", mode))
        if bow:
            report.ratios[f"lev_exhaustive_over_bow_l1_{mode}"] = lev / bow


def format_table(report: BenchReport) -> str:
    header = f"{'strategy':<8} {'mode':<10} {'workers':>7} {'queries':>7} {'mean_ms':>10} {'p95_ms':>10} {'build_ms':>10}"
    rows = [header, "-" * len(header)]
    for r in report.rows:
        rows.append(
            f"{r.strategy:<8} {r.mode:<10} {r.workers:>7d} {r.queries:>7d} "
            f"{r.mean_ms:>10.3f} {r.p95_ms:>10.3f} {r.build_ms:>10.3f}"
        )
    for name, value in report.ratios.items():
        rows.append(f"{name}: {value:.2f}x")
    rows.append(f"environment: {report.environment}")
    return "\n".join(rows)


def report_to_json(report: BenchReport) -> dict:
    return {
        "environment": report.environment,
        "rows": [
            {
                "strategy": r.strategy,
                "mode": r.mode,
                "workers": r.workers,
                "queries": r.queries,
                "mean_ms": r.mean_ms,
                "p95_ms": r.p95_ms,
                "build_ms": r.build_ms,
            }
            for r in report.rows
        ],
        "ratios": report.ratios,
    }


def save_report(report: BenchReport, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report_to_json(report), fh, indent=2)
        fh.write("\n")
