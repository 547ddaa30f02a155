"""Race edit distance against bag-of-words on one synthetic corpus.

Generates a deterministic corpus, then sends the same noisy queries
through each strategy, comparing answers and per-query timings — the
trade-off the engine's strategy switch exists for.

    python3 demos/strategy_comparison.py [lines]
"""

import sys
import tempfile
import time
from pathlib import Path

from nextline import best_match
from nextline.search import SearchDomain
from nextline.store import load_corpus
from nextline.synth import generate_corpus_files, sample_queries
from nextline.cli import main as cli

LINES = int(sys.argv[1]) if len(sys.argv) > 1 else 5000

with tempfile.TemporaryDirectory() as tmp:
    srt_dir = Path(tmp) / "srt"
    corpus_path = Path(tmp) / "corpus.jsonl"
    generate_corpus_files(srt_dir, lines=LINES, seed=7)
    cli(["ingest", str(srt_dir), str(corpus_path)])
    corpus = load_corpus(corpus_path)

domain = SearchDomain(corpus, [])
queries = sample_queries([line.text for line in corpus.lines], 30, seed=8)

print(f"\ncorpus: {corpus.n} lines; {len(queries)} noisy queries\n")
print(f"{'strategy':<10} {'mode':<11} {'ms/query':>9}   example answer")
print("-" * 72)

answers: dict[str, list[int]] = {}
for strategy, mode in [
    ("lev", "exhaustive"),
    ("bow-l1", "exhaustive"),
    ("bow-l1", "indexed"),
    ("bow-l2", "indexed"),
]:
    best_match(queries[0], domain, strategy=strategy, mode=mode)  # warm up
    started = time.perf_counter()
    results = [
        best_match(q, domain, strategy=strategy, mode=mode) for q in queries
    ]
    ms = (time.perf_counter() - started) / len(queries) * 1000
    answers[f"{strategy}/{mode}"] = [r.line_id for r in results]
    sample = corpus.lines[results[0].line_id].text
    print(f"{strategy:<10} {mode:<11} {ms:>9.2f}   {sample[:40]!r}")

same = answers["bow-l1/exhaustive"] == answers["bow-l1/indexed"]
print(f"\nindexed bow-l1 answers identical to exhaustive: {same}")
agree = sum(
    a == b for a, b in zip(answers["lev/exhaustive"], answers["bow-l1/indexed"])
)
print(f"lev and bow-l1 picked the same line on {agree}/{len(queries)} queries")
print("(disagreement is expected: one counts edits, the other shared stems)")
