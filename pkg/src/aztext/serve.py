"""HTTP/1.1 JSON prediction service around a single loaded model."""

from __future__ import annotations

import json
import logging
import threading
from http import HTTPStatus
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .classify import TrainedModel, load_model, predict_text
from .errors import EmptyInput

log = logging.getLogger(__name__)

DEFAULT_MAX_BODY = 1 << 20
JSON_TYPE = "application/json; charset=utf-8"


def model_info(model: TrainedModel) -> dict:
    return {
        "model_kind": model.kind,
        "classes": list(model.class_names),
        "vocabulary_size": len(model.vocabulary),
        "format_version": model.format_version,
        "vectorizer": model.vectorizer,
    }


class PredictHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server: "PredictServer"

    def log_message(self, format, *args):
        log.info("%s - %s", self.address_string(), format % args)

    def _send(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", JSON_TYPE)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _error(self, status: HTTPStatus, message: str) -> None:
        self._send(status, {"error": message})

    def do_GET(self):
        if self.path == "/v1/health":
            self._send(HTTPStatus.OK, {"status": "ok"})
        elif self.path == "/v1/model":
            self._send(HTTPStatus.OK, model_info(self.server.model))
        else:
            self._error(HTTPStatus.NOT_FOUND, f"no route {self.path}")

    def do_POST(self):
        if self.path != "/v1/predict":
            self._drain()
            self._error(HTTPStatus.NOT_FOUND, f"no route {self.path}")
            return
        try:
            length = int(self.headers.get("Content-Length") or 0)
        except ValueError:
            self.close_connection = True
            self._error(HTTPStatus.BAD_REQUEST, "bad Content-Length")
            return
        if length > self.server.max_body:
            # refuse without reading the oversized body
            self.close_connection = True
            self._error(HTTPStatus.REQUEST_ENTITY_TOO_LARGE, f"body exceeds {self.server.max_body} bytes")
            return
        raw = self.rfile.read(length)
        try:
            request = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            self._error(HTTPStatus.BAD_REQUEST, f"malformed JSON: {exc}")
            return
        if not isinstance(request, dict) or not isinstance(request.get("text"), str):
            self._error(HTTPStatus.BAD_REQUEST, "body must be a JSON object with a string 'text' member")
            return
        model = self.server.model
        try:
            category, scores = predict_text(model, request["text"])
        except EmptyInput as exc:
            self._error(HTTPStatus.UNPROCESSABLE_ENTITY, str(exc))
            return
        self._send(HTTPStatus.OK, {"category": category, "scores": scores, "model_kind": model.kind})

    def _drain(self):
        try:
            length = int(self.headers.get("Content-Length") or 0)
        except ValueError:
            length = 0
        if 0 < length <= self.server.max_body:
            self.rfile.read(length)
        elif length:
            self.close_connection = True


class PredictServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address, model: TrainedModel, max_body: int = DEFAULT_MAX_BODY):
        self.model = model
        self.max_body = max_body
        super().__init__(address, PredictHandler)


def make_server(model: TrainedModel, host: str = "127.0.0.1", port: int = 8080, max_body: int = DEFAULT_MAX_BODY):
    return PredictServer((host, port), model, max_body)


def start_background(model: TrainedModel, host: str = "127.0.0.1", port: int = 0, max_body: int = DEFAULT_MAX_BODY):
    """Start a server on a daemon thread; returns ``(server, thread)``. Port 0 picks a free port."""
    server = make_server(model, host, port, max_body)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, thread


def serve(model_path, bind: str = "127.0.0.1", port: int = 8080, max_body: int = DEFAULT_MAX_BODY) -> None:
    """Load the model, then bind and serve until interrupted."""
    model = load_model(model_path)
    server = make_server(model, bind, port, max_body)
    log.info("serving %s model on http://%s:%d", model.kind, *server.server_address[:2])
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
