"""Operator command line: gen, ingest, chat, bench, serve.

Exit codes: 0 on success, 1 on runtime errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import threading
import uuid
from pathlib import Path

from nextline.bench import EquivalenceError, format_table, run_bench, save_report
from nextline.corpus import EmptyCorpusError, build_corpus
from nextline.engine import Engine, EngineConfig, load_stopwords
from nextline.knowledge import FixtureProvider
from nextline.search import MODES, STRATEGIES
from nextline.service import build_server
from nextline.srt import SrtParseError, clean_cues, parse_srt
from nextline.store import CorpusFormatError, load_corpus, save_corpus
from nextline.synth import generate_corpus_files


def _load_config(path: str | None) -> EngineConfig:
    if path is None:
        return EngineConfig()
    return EngineConfig.from_file(path)


def _usage_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def cmd_gen(args: argparse.Namespace) -> int:
    try:
        summary = generate_corpus_files(
            args.out_dir,
            lines=args.lines,
            vocab=args.vocab,
            seed=args.seed,
            episodes=args.episodes,
        )
    except ValueError as exc:
        return _usage_error(str(exc))
    print(json.dumps(summary))
    return 0


def cmd_ingest(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    stopwords = load_stopwords(config.stoplist_path)
    src = Path(args.src_dir)
    files = sorted(src.glob("*.srt"))
    if not files:
        return _usage_error(f"no .srt files in {src}")

    cleaned_files: list[tuple[str, list[str]]] = []
    total_cues = 0
    kept = 0
    for path in files:
        try:
            cues = parse_srt(path.read_text("utf-8"))
        except SrtParseError as exc:
            print(f"{path}:{exc.line_no}: {exc}", file=sys.stderr)
            return 1
        except OSError as exc:
            print(f"{path}: {exc}", file=sys.stderr)
            return 1
        utterances = clean_cues(cues)
        total_cues += len(cues)
        kept += len(utterances)
        cleaned_files.append((path.name, utterances))

    try:
        corpus = build_corpus(cleaned_files, stopwords, config.min_length)
    except EmptyCorpusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    save_corpus(corpus, args.out_path)
    print(
        json.dumps(
            {
                "files": len(files),
                "cues": total_cues,
                "kept_lines": kept,
                "dropped_lines": total_cues - kept,
            }
        )
    )
    return 0


def _build_engine(args: argparse.Namespace) -> Engine:
    config = _load_config(args.config)
    if getattr(args, "strategy", None):
        config.strategy = args.strategy
    if getattr(args, "threshold", None) is not None:
        config.threshold = args.threshold
    if getattr(args, "mode", None):
        config.mode = args.mode
    if getattr(args, "workers", None):
        config.workers = args.workers
    stopwords = load_stopwords(config.stoplist_path)
    corpus = load_corpus(args.corpus, stopwords, config.min_length)
    knowledge = (
        FixtureProvider(config.knowledge_path) if config.knowledge_path else None
    )
    return Engine(corpus, config, knowledge=knowledge)


def _format_score(strategy: str, score: float) -> str:
    if strategy == "lev":
        return str(int(score))
    return f"{score:.3f}"


def cmd_chat(args: argparse.Namespace) -> int:
    try:
        engine = _build_engine(args)
    except (OSError, CorpusFormatError, EmptyCorpusError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    session = engine.session(f"cli-{uuid.uuid4().hex[:12]}")
    print("type /quit to exit, /stats for corpus stats")
    while True:
        try:
            line = input("> ")
        except (EOFError, KeyboardInterrupt):
            print()
            break
        text = line.strip()
        if not text:
            continue
        if text == "/quit":
            break
        if text == "/stats":
            print(json.dumps(engine.stats()))
            continue
        reply = engine.respond(session, text)
        if reply.match is not None:
            note = (
                f"{reply.provenance} {session.strategy} "
                f"d={_format_score(session.strategy, reply.match.score)}"
            )
        else:
            note = reply.provenance
        print(f"{reply.text}  [{note}]")
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    stopwords = load_stopwords(config.stoplist_path)
    try:
        corpus = load_corpus(args.corpus, stopwords, config.min_length)
    except (OSError, CorpusFormatError, EmptyCorpusError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    try:
        queries = [
            line.strip()
            for line in Path(args.queries).read_text("utf-8").splitlines()
            if line.strip()
        ]
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not queries:
        return _usage_error(f"queries file {args.queries} has no queries")

    strategies = [s.strip() for s in args.strategies.split(",") if s.strip()]
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    try:
        workers_list = [int(w) for w in args.workers.split(",") if w.strip()]
    except ValueError:
        return _usage_error(f"bad workers list: {args.workers!r}")
    bad = [s for s in strategies if s not in STRATEGIES]
    if bad or not strategies:
        return _usage_error(f"strategies must be drawn from {STRATEGIES}, got {bad}")
    bad = [m for m in modes if m not in MODES]
    if bad or not modes:
        return _usage_error(f"modes must be drawn from {MODES}, got {bad}")
    if not workers_list or any(w < 1 for w in workers_list):
        return _usage_error("workers must be positive integers")

    if "lev" in strategies and "indexed" in modes:
        print("note: lev has no indexed variant; those rows are skipped")
    try:
        report = run_bench(
            corpus,
            queries,
            strategies,
            modes,
            workers_list,
            stopwords,
            config.min_length,
        )
    except EquivalenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(format_table(report))
    if args.json:
        save_report(report, args.json)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    if args.port is not None:
        config.port = args.port
    if args.bind is not None:
        config.bind = args.bind
    if args.static_dir is not None:
        config.static_dir = args.static_dir

    try:
        server = build_server(config)
    except OSError as exc:
        print(f"error: cannot bind {config.bind}:{config.port}: {exc}", file=sys.stderr)
        return 1

    failure: list[str] = []

    def load() -> None:
        try:
            stopwords = load_stopwords(config.stoplist_path)
            corpus = load_corpus(args.corpus, stopwords, config.min_length)
            knowledge = (
                FixtureProvider(config.knowledge_path)
                if config.knowledge_path
                else None
            )
            server.attach_engine(Engine(corpus, config, knowledge=knowledge))
            print(f"serving on http://{config.bind}:{config.port}/")
        except Exception as exc:  # surface load failures, then stop serving
            failure.append(str(exc))
            threading.Thread(target=server.shutdown, daemon=True).start()

    threading.Thread(target=load, daemon=True).start()
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    if failure:
        print(f"error: {failure[0]}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nextline",
        description="Retrieval chatbot: corpus tools, terminal chat, benchmark, HTTP service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a seeded synthetic SRT corpus")
    p.add_argument("out_dir")
    p.add_argument("--lines", type=int, required=True, help="dialogue lines to keep")
    p.add_argument("--vocab", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--episodes", type=int, default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("ingest", help="parse and clean .srt files into a corpus snapshot")
    p.add_argument("src_dir")
    p.add_argument("out_path")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("chat", help="talk to the engine in the terminal")
    p.add_argument("--corpus", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--strategy", choices=STRATEGIES, default=None)
    p.add_argument("--mode", choices=MODES, default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_chat)

    p = sub.add_parser("bench", help="time strategies after proving mode equivalence")
    p.add_argument("--corpus", required=True)
    p.add_argument("--queries", required=True)
    p.add_argument("--strategies", default="lev,bow-l1")
    p.add_argument("--modes", default="exhaustive,indexed")
    p.add_argument("--workers", default="1")
    p.add_argument("--json", default=None, help="also write the report as JSON")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("serve", help="run the HTTP chat service")
    p.add_argument("--corpus", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--bind", default=None)
    p.add_argument("--static-dir", dest="static_dir", default=None)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
