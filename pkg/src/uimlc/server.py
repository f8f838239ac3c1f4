"""Local workbench server: one document session over HTTP+JSON.

The server is a developer desk tool: it binds localhost and holds exactly one
session (one document). Connections are handled in threads (keep-alive clients
must not block each other) but a session lock serializes the API handlers, so
requests still apply one at a time in arrival order.

Endpoints (all bodies JSON):

    GET  /api/document          current text + parse tree + render params
    PUT  /api/document          {text} — replace document, snapshot
    POST /api/property          {part, prop, value} — edit active style, snapshot
    POST /api/transform         {mapping} — platform text + source map + report
    POST /api/render            {target?, style?, content?, structure?} —
                                update params and render (no snapshot)
    POST /api/event             {part, event, data?} — dispatch into the runtime
    GET  /api/sourcemap         source map under current params
    GET  /api/history           all snapshots
    POST /api/history/restore   {ordinal} — restore by appending a snapshot

Errors are {code, message, location?}: 422 for documents that do not parse,
400 for other domain errors, 500 for bugs. Mutations (document replace,
property edit, restore) append exactly one snapshot each; rendering never
does. Static workbench assets are served at ``/``.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional

from .behavior import (DEFAULT_DEPTH_LIMIT, EventInstance, RuntimeState, dispatch,
                       instantiate_runtime)
from .cli import _resolve_mapping, detect_vocabulary_id, render_document
from .errors import MalformedXmlError, UimlError
from .jsonio import diagnostic_to_json, document_to_json, effect_to_json, location_to_json
from .model import PropertyBinding, Style, UimlDocument
from .parser import parse_document
from .serializer import serialize_document
from .style import select_style
from .vocab import builtin_vocabulary
from .validate import validate
from .xform import identity_source_map, transform

SAMPLE_DOCUMENT = """<?xml version="1.0"?>
<uiml name="sample">
  <interface name="Sample">
    <structure id="main">
      <part name="Top" class="G:TopContainer">
        <part name="Hello" class="G:Label"/>
      </part>
    </structure>
    <style id="base">
      <property part-name="Top" name="g:title">Sample</property>
      <property part-name="Hello" name="g:text">Hello, world</property>
    </style>
  </interface>
</uiml>
"""


def error_payload(exc: UimlError) -> dict:
    payload = {"code": exc.code, "message": exc.message}
    if exc.location is not None:
        payload["location"] = location_to_json(exc.location)
    return payload


@dataclass
class Snapshot:
    ordinal: int
    document_text: str
    label: str
    timestamp: float
    render: Optional[dict] = None      # {"target","text","annotations"} | {"error"}
    source_map: Optional[dict] = None

    def to_json(self) -> dict:
        return {"ordinal": self.ordinal, "label": self.label,
                "timestamp": self.timestamp, "document_text": self.document_text,
                "render": self.render, "source_map": self.source_map}


class Session:
    """One open document plus its full snapshot history."""

    def __init__(self, text: str):
        self.document: UimlDocument = parse_document(text)
        self.text = text
        self.params: dict = {"target": "html", "style": None, "content": None,
                             "structure": None}
        self.history: list[Snapshot] = []
        self.runtime: Optional[RuntimeState] = None
        self.snapshot("open")

    def load_text(self, text: str) -> None:
        self.document = parse_document(text)
        self.text = text
        self.runtime = None

    def render_current(self) -> tuple[dict, Optional[dict]]:
        try:
            output, source_map = render_document(
                self.document, self.params["target"], style_id=self.params["style"],
                content_id=self.params["content"],
                structure_id=self.params["structure"])
        except UimlError as exc:
            return {"error": error_payload(exc)}, None
        return ({"target": output.target, "text": output.text,
                 "annotations": output.annotations},
                json.loads(source_map.to_json_text()))

    def snapshot(self, label: str) -> Snapshot:
        render, source_map = self.render_current()
        entry = Snapshot(len(self.history), self.text, label, time.time(),
                         render, source_map)
        self.history.append(entry)
        return entry

    def ensure_runtime(self) -> RuntimeState:
        if self.runtime is None:
            prefix = builtin_vocabulary(
                detect_vocabulary_id(self.document)).platform_prefix
            self.runtime = instantiate_runtime(
                self.document, style_id=self.params["style"],
                content_id=self.params["content"], doc_prefix=prefix,
                depth_limit=DEFAULT_DEPTH_LIMIT)
        return self.runtime

    def diagnostics(self) -> list[dict]:
        vocabulary = builtin_vocabulary(detect_vocabulary_id(self.document))
        found = list(self.document.warnings) + validate(self.document, vocabulary)
        return [diagnostic_to_json(d) for d in found]

    # -- API operations ---------------------------------------------------------

    def api_get_document(self, _body) -> dict:
        return {"text": self.text, "tree": document_to_json(self.document),
                "params": self.params, "diagnostics": self.diagnostics()}

    def api_put_document(self, body) -> dict:
        self.load_text(_required(body, "text"))
        entry = self.snapshot("edit")
        return {"ok": True, "ordinal": entry.ordinal, "render": entry.render,
                "diagnostics": self.diagnostics()}

    def api_post_property(self, body) -> dict:
        part = _required(body, "part")
        prop = _required(body, "prop")
        value = _required(body, "value")
        if not self.document.interfaces:
            raise UimlError("EmptyInterface", "no interface to edit")
        interface = self.document.interfaces[0]
        if part not in interface.all_part_names():
            raise UimlError("DanglingPartRef",
                            f"no part named {part!r} in interface "
                            f"{interface.name!r}")
        style = select_style(interface, self.params["style"])
        if style is None:
            style = Style("style-1")
            interface.styles.append(style)
        for binding in reversed(style.properties):
            if (not binding.targets_class and binding.target == part
                    and binding.prop_name == prop):
                binding.value = value
                break
        else:
            style.properties.append(PropertyBinding(part, False, prop, value))
        # Regenerate canonical text from the edited model, then reload so the
        # tree carries fresh source locations.
        self.load_text(serialize_document(self.document))
        entry = self.snapshot(f"set {part}.{prop}")
        return {"ok": True, "ordinal": entry.ordinal, "text": self.text,
                "render": entry.render}

    def api_post_transform(self, body) -> dict:
        mapping, target_vocab = _resolve_mapping(_required(body, "mapping"))
        transformed, source_map, report = transform(
            self.document, mapping, target_vocab, style_id=self.params["style"],
            content_id=self.params["content"])
        return {
            "text": serialize_document(transformed),
            "source_map": json.loads(source_map.to_json_text()),
            "report": {
                "dropped_properties": [list(pair)
                                       for pair in report.dropped_properties],
                "translated_events": report.translated_events,
                "warnings": [diagnostic_to_json(w) for w in report.warnings],
            },
        }

    def api_post_render(self, body) -> dict:
        for key in ("target", "style", "content", "structure"):
            if key in body:
                self.params[key] = body[key]
        render, source_map = self.render_current()
        if "error" in render:
            raise UimlError(render["error"]["code"], render["error"]["message"])
        return {**render, "source_map": source_map}

    def api_post_event(self, body) -> dict:
        runtime = self.ensure_runtime()
        event = EventInstance(_required(body, "part"),
                              body.get("event") or _required(body, "event_class"),
                              dict(body.get("data", {})))
        effects = dispatch(runtime, event)
        return {"effects": [effect_to_json(e) for e in effects],
                "active_structure": runtime.active_structure_id,
                "widgets": runtime.widgets}

    def api_get_sourcemap(self, _body) -> dict:
        target = self.params["target"]
        if detect_vocabulary_id(self.document) == "generic":
            mapping, target_vocab = _resolve_mapping(f"generic-to-{target}")
            _, source_map, _ = transform(self.document, mapping, target_vocab,
                                         style_id=self.params["style"],
                                         content_id=self.params["content"])
        else:
            source_map = identity_source_map(self.document, target)
        return {"source_map": json.loads(source_map.to_json_text())}

    def api_get_history(self, _body) -> dict:
        return {"entries": [entry.to_json() for entry in self.history]}

    def api_post_restore(self, body) -> dict:
        ordinal = _required(body, "ordinal")
        if not isinstance(ordinal, int) or not 0 <= ordinal < len(self.history):
            raise UimlError("UnknownSnapshot", f"no snapshot with ordinal {ordinal!r}")
        self.load_text(self.history[ordinal].document_text)
        entry = self.snapshot(f"restore {ordinal}")
        return {"ok": True, "ordinal": entry.ordinal, "text": self.text,
                "render": entry.render}


def _required(body: dict, key: str):
    if not isinstance(body, dict) or key not in body or body[key] is None:
        raise UimlError("FormatError", f"request body needs field {key!r}")
    return body[key]


_ROUTES = {
    ("GET", "/api/document"): Session.api_get_document,
    ("PUT", "/api/document"): Session.api_put_document,
    ("POST", "/api/property"): Session.api_post_property,
    ("POST", "/api/transform"): Session.api_post_transform,
    ("POST", "/api/render"): Session.api_post_render,
    ("POST", "/api/event"): Session.api_post_event,
    ("GET", "/api/sourcemap"): Session.api_get_sourcemap,
    ("GET", "/api/history"): Session.api_get_history,
    ("POST", "/api/history/restore"): Session.api_post_restore,
}

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json; charset=utf-8",
    ".map": "application/json; charset=utf-8",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
}


def default_assets_dir() -> Path:
    local_build = Path.cwd() / "frontend" / "dist"
    if local_build.is_dir():
        return local_build
    return Path(__file__).parent / "workbench_static"


def make_handler(session: Session, assets_dir: Path):
    session_lock = threading.Lock()

    class WorkbenchHandler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, format, *args):  # quiet by default
            pass

        def _send_json(self, status: int, payload: dict) -> None:
            raw = json.dumps(payload, indent=2).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(raw)))
            self.end_headers()
            self.wfile.write(raw)

        def _read_body(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            if length == 0:
                return {}
            raw = self.rfile.read(length)
            try:
                return json.loads(raw.decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                raise UimlError("FormatError", f"request body is not JSON: {exc}")

        def _dispatch_api(self, method: str) -> None:
            handler = _ROUTES.get((method, self.path.split("?", 1)[0]))
            if handler is None:
                self._send_json(404, {"code": "NotFound",
                                      "message": f"no route {method} {self.path}"})
                return
            try:
                body = self._read_body()
                with session_lock:
                    payload = handler(session, body)
            except MalformedXmlError as exc:
                self._send_json(422, error_payload(exc))
            except UimlError as exc:
                status = 422 if exc.code in ("MalformedXml",) else 400
                self._send_json(status, error_payload(exc))
            except Exception as exc:  # noqa: BLE001 - surface as 500, keep serving
                self._send_json(500, {"code": "Internal", "message": repr(exc)})
            else:
                self._send_json(200, payload)

        def _serve_static(self) -> None:
            path = self.path.split("?", 1)[0]
            name = "index.html" if path in ("", "/") else path.lstrip("/")
            target = (assets_dir / name).resolve()
            if (not str(target).startswith(str(assets_dir.resolve()))
                    or not target.is_file()):
                self._send_json(404, {"code": "NotFound", "message": path})
                return
            raw = target.read_bytes()
            self.send_response(200)
            self.send_header("Content-Type",
                             _CONTENT_TYPES.get(target.suffix, "application/octet-stream"))
            self.send_header("Content-Length", str(len(raw)))
            self.end_headers()
            self.wfile.write(raw)

        def do_GET(self):
            if self.path.split("?", 1)[0].startswith("/api/"):
                self._dispatch_api("GET")
            else:
                self._serve_static()

        def do_PUT(self):
            self._dispatch_api("PUT")

        def do_POST(self):
            self._dispatch_api("POST")

    return WorkbenchHandler


def create_server(session: Session, host: str = "127.0.0.1", port: int = 0,
                  assets: Optional[str] = None) -> ThreadingHTTPServer:
    assets_dir = Path(assets) if assets else default_assets_dir()
    server = ThreadingHTTPServer((host, port), make_handler(session, assets_dir))
    server.daemon_threads = True
    return server


def run_server(open_file: Optional[str] = None, host: str = "127.0.0.1",
               port: int = 8765, assets: Optional[str] = None) -> None:
    text = (Path(open_file).read_text(encoding="utf-8") if open_file
            else SAMPLE_DOCUMENT)
    session = Session(text)
    server = create_server(session, host, port, assets)
    actual_host, actual_port = server.server_address[:2]
    print(f"workbench serving on http://{actual_host}:{actual_port}/ "
          f"(document: {open_file or 'built-in sample'})")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
