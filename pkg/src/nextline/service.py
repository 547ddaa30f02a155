"""HTTP front end for the engine.

Endpoints: POST /api/chat, GET /api/stats, GET /api/health, plus an
optional static directory served at "/" for the browser client.  All
bodies are JSON/UTF-8.  Requests within one session are serialized;
distinct sessions run concurrently on the threading server.
"""

from __future__ import annotations

import json
import mimetypes
import threading
import time
import traceback
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlsplit

from nextline.engine import Engine, EngineConfig
from nextline.search import STRATEGIES


class ChatServer(ThreadingHTTPServer):
    """Holds the engine and per-session locks for the handler."""

    daemon_threads = True

    def __init__(self, address: tuple[str, int], config: EngineConfig):
        super().__init__(address, _Handler)
        self.config = config
        self.engine: Engine | None = None
        self._session_locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def attach_engine(self, engine: Engine) -> None:
        self.engine = engine

    def session_lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            lock = self._session_locks.get(session_id)
            if lock is None:
                lock = threading.Lock()
                self._session_locks[session_id] = lock
            return lock


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server: ChatServer

    def log_message(self, fmt: str, *args) -> None:  # quiet by default
        pass

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self._cors_headers()
        self.end_headers()
        self.wfile.write(body)

    def _cors_headers(self) -> None:
        origin = self.server.config.cors_origin
        if origin:
            self.send_header("Access-Control-Allow-Origin", origin)
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def do_OPTIONS(self) -> None:
        self.send_response(204)
        self.send_header("Content-Length", "0")
        self._cors_headers()
        self.end_headers()

    def do_GET(self) -> None:
        path = urlsplit(self.path).path
        if path == "/api/health":
            if self.server.engine is None:
                self._send_json(503, {"status": "loading"})
            else:
                self._send_json(200, {"status": "ok"})
            return
        if path == "/api/stats":
            engine = self.server.engine
            if engine is None:
                self._send_json(503, {"status": "loading"})
                return
            self._send_json(200, engine.stats())
            return
        if path.startswith("/api/"):
            self._send_json(404, {"error": "not_found"})
            return
        self._serve_static(path)

    def do_POST(self) -> None:
        parts = urlsplit(self.path)
        # Drain the body up front: on keep-alive connections an unread
        # body would be misparsed as the start of the next request.
        try:
            length = int(self.headers.get("Content-Length", "0") or "0")
        except ValueError:
            length = 0
        raw = self.rfile.read(length) if length > 0 else b""

        if parts.path != "/api/chat":
            self._send_json(404, {"error": "not_found"})
            return
        engine = self.server.engine
        if engine is None:
            self._send_json(503, {"status": "loading"})
            return

        try:
            payload = json.loads(raw.decode("utf-8"))
            if not isinstance(payload, dict):
                raise ValueError("body must be a JSON object")
        except (ValueError, UnicodeDecodeError):
            self._send_json(400, {"error": "bad_json"})
            return

        session_id = str(payload.get("session_id") or "").strip()
        text = str(payload.get("text") or "")
        if not session_id:
            self._send_json(400, {"error": "empty_session_id"})
            return
        if not text.strip():
            self._send_json(400, {"error": "empty_text"})
            return

        params = parse_qs(parts.query)
        strategy = params.get("strategy", [None])[0]
        threshold = params.get("threshold", [None])[0]
        if strategy is not None and strategy not in STRATEGIES:
            self._send_json(400, {"error": "bad_strategy"})
            return
        if threshold is not None:
            try:
                threshold = float(threshold)
            except ValueError:
                self._send_json(400, {"error": "bad_threshold"})
                return

        try:
            with self.server.session_lock(session_id):
                session = engine.session(session_id)
                if strategy is not None:
                    session.strategy = strategy
                    if threshold is None and engine.config.threshold is None:
                        session.threshold = engine.config.effective_threshold(strategy)
                if threshold is not None:
                    session.threshold = threshold
                started = time.perf_counter()
                reply = engine.respond(session, text)
                latency_ms = (time.perf_counter() - started) * 1000.0
        except Exception:
            traceback.print_exc()
            self._send_json(500, {"error": "internal"})
            return

        self._send_json(
            200,
            {
                "reply": reply.text,
                "provenance": reply.provenance,
                "matched_line": reply.matched_line_text,
                "score": reply.match.score if reply.match else None,
                "strategy": session.strategy,
                "latency_ms": latency_ms,
            },
        )

    def _serve_static(self, path: str) -> None:
        root = self.server.config.static_dir
        if root is None:
            if path == "/":
                self._send_json(
                    200,
                    {
                        "service": "nextline",
                        "endpoints": ["/api/chat", "/api/stats", "/api/health"],
                    },
                )
            else:
                self._send_json(404, {"error": "not_found"})
            return
        root_dir = Path(root).resolve()
        relative = path.lstrip("/") or "index.html"
        target = (root_dir / relative).resolve()
        if root_dir not in target.parents and target != root_dir:
            self._send_json(404, {"error": "not_found"})
            return
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            self._send_json(404, {"error": "not_found"})
            return
        content_type = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        body = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self._cors_headers()
        self.end_headers()
        self.wfile.write(body)


def build_server(config: EngineConfig, engine: Engine | None = None) -> ChatServer:
    """Bind the address from config; the engine may be attached later.

    Until an engine is attached every API endpoint answers 503
    {"status": "loading"}.
    """
    server = ChatServer((config.bind, config.port), config)
    config.port = server.server_address[1]  # resolve port 0 to the real port
    if engine is not None:
        server.attach_engine(engine)
    return server
