"""HTTP+JSON host for the session service (stdlib http.server, threading)."""
from __future__ import annotations

import json
import re
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from .service import ServiceError, SessionService

_ROUTES = [
    ("POST", re.compile(r"^/api/sessions$"), "create_session"),
    ("GET", re.compile(r"^/api/sessions/(?P<sid>[\w-]+)/front$"), "front"),
    ("POST", re.compile(r"^/api/sessions/(?P<sid>[\w-]+)/runs$"), "start_run"),
    ("GET", re.compile(r"^/api/sessions/(?P<sid>[\w-]+)/runs/(?P<rid>[\w-]+)/trace$"), "trace"),
    ("POST", re.compile(r"^/api/sessions/(?P<sid>[\w-]+)/runs/(?P<rid>[\w-]+)/stop$"), "stop"),
    ("GET", re.compile(r"^/api/sessions/(?P<sid>[\w-]+)/runs/(?P<rid>[\w-]+)/export$"), "export"),
]


def make_handler(service: SessionService):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # quiet; the service is the source of truth
            pass

        def _send(self, status: int, body: bytes, content_type: str):
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(body)

        def _send_json(self, status: int, doc):
            self._send(status, (json.dumps(doc) + "\n").encode(), "application/json")

        def _read_body(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            if length == 0:
                return {}
            raw = self.rfile.read(length)
            try:
                doc = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ServiceError("bad_request", f"request body is not valid JSON: {exc}", status=400)
            if not isinstance(doc, dict):
                raise ServiceError("bad_request", "request body must be a JSON object", status=400)
            return doc

        def do_OPTIONS(self):
            self.send_response(204)
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Content-Length", "0")
            self.end_headers()

        def do_GET(self):
            self._dispatch("GET")

        def do_POST(self):
            self._dispatch("POST")

        def _dispatch(self, method: str):
            url = urlparse(self.path)
            try:
                for verb, pattern, action in _ROUTES:
                    match = pattern.match(url.path)
                    if match and verb == method:
                        self._handle(action, match.groupdict(), parse_qs(url.query))
                        return
                raise ServiceError("not_found", f"no route for {method} {url.path}", status=404)
            except ServiceError as exc:
                self._send_json(exc.status, exc.to_json())

        def _handle(self, action: str, params: dict, query: dict):
            if action == "create_session":
                body = self._read_body()
                source = body.get("instance")
                if source is None:
                    source = body.get("instance_path")
                if source is None:
                    raise ServiceError(
                        "bad_request", "provide 'instance' (inline document) or 'instance_path'",
                        field="instance", status=422,
                    )
                self._send_json(201, service.create_session(source))
            elif action == "front":
                summary = service.session_summary(params["sid"])
                self._send_json(200, {"front": summary["front"], "weights": summary["weights"]})
            elif action == "start_run":
                body = self._read_body()
                if "mode" not in body:
                    raise ServiceError("bad_request", "mode is required", field="mode", status=422)
                if "evaluation_budget" not in body:
                    raise ServiceError(
                        "bad_request", "evaluation_budget is required",
                        field="evaluation_budget", status=422,
                    )
                kwargs = {
                    "mode": body["mode"],
                    "reference_point": body.get("reference_point"),
                    "evaluation_budget": body["evaluation_budget"],
                    "cone_warmup_evals": body.get("cone_warmup_evals"),
                    "trace_stride": body.get("trace_stride", 100),
                    "seed": body.get("seed", 0),
                }
                self._send_json(201, service.start_run(params["sid"], **kwargs))
            elif action == "trace":
                try:
                    since = int(query.get("since", ["-1"])[0])
                except ValueError:
                    raise ServiceError("bad_request", "since must be an integer", field="since", status=400)
                self._send_json(200, service.poll_trace(params["sid"], params["rid"], since=since))
            elif action == "stop":
                self._send_json(200, service.stop_run(params["sid"], params["rid"]))
            elif action == "export":
                fmt = query.get("format", [""])[0]
                body, content_type = service.export(params["sid"], params["rid"], fmt)
                self._send(200, body, content_type)

    return Handler


def make_server(service: SessionService, host: str = "127.0.0.1", port: int = 0) -> ThreadingHTTPServer:
    """Bind the API server; port 0 picks an ephemeral port (server.server_address)."""
    return ThreadingHTTPServer((host, port), make_handler(service))


def serve(service: SessionService, host: str = "127.0.0.1", port: int = 8734):
    httpd = make_server(service, host, port)
    print(f"serving on http://{host}:{httpd.server_address[1]} (Ctrl-C to stop)")
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
