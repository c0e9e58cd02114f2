"""HTTP facade over one loaded case for the companion UI and other clients.

The case is parsed once at startup and never mutated; every what-if is
evaluated against the immutable baseline, so concurrent requests need no
locking and any sequence of requests leaves the baseline unchanged.

Route handling is a pure function from (method, path, query, body) to
(status, payload) so it can be tested without sockets; the HTTP wrapper
only does transport. Static UI assets, when built, are served for
non-/api paths.
"""

from __future__ import annotations

import json
import mimetypes
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Any, Mapping, Optional
from urllib.parse import parse_qs, urlsplit

from .analysis import BlockBounds, LintFinding, dependence_bounds, lint, sensitivity
from .bbn import ImpossibleEvidenceError, query
from .caseformat import CaseDocument, document_to_dict
from .model import AssuranceCase, MULTI_SUBCLAIM_KINDS
from .propagation import PropagationResult, propagate


def propagation_payload(case: AssuranceCase, result: PropagationResult) -> dict:
    """JSON-ready view of one propagation, shared by CLI and service."""
    return {
        "nodes": {node.id: result.values[node.id] for node in case.nodes},
        "top": case.top,
        "top_confidence": result.values[case.top],
        "blocks": [
            {
                "block": trace.block,
                "parent": trace.parent,
                "subclaim_confidences": list(trace.subclaim_confs),
                "sideclaim_confidence": trace.sideclaim_conf,
                "output": trace.output,
            }
            for trace in (
                result.traces[block.id]
                for block in case.blocks
                if block.id in result.traces
            )
        ],
        "warnings": list(result.warnings),
    }


def bounds_payload(bounds: BlockBounds) -> dict:
    return {
        "block": bounds.block,
        "low": bounds.low,
        "high": bounds.high,
        "point": bounds.point,
    }


def lint_payload(findings: list[LintFinding]) -> dict:
    return {
        "findings": [
            {
                "rule": f.rule,
                "severity": f.severity.value,
                "node": f.node,
                "message": f.message,
            }
            for f in findings
        ]
    }


def sensitivity_payload(delta: float, entries) -> dict:
    return {
        "delta": delta,
        "entries": [
            {
                "leaf": e.leaf,
                "derivative": e.derivative,
                "at_zero": e.at_zero,
                "at_one": e.at_one,
                "one_sided": e.one_sided,
            }
            for e in entries
        ],
    }


@dataclass(frozen=True)
class ServiceState:
    """Everything a request needs: the document and its baseline run."""

    document: CaseDocument
    baseline: PropagationResult

    @classmethod
    def from_document(cls, document: CaseDocument) -> "ServiceState":
        return cls(document=document, baseline=propagate(document.case))


def _error(status: int, message: str) -> tuple[int, dict]:
    return status, {"error": message}


def _handle_whatif(state: ServiceState, body: Any) -> tuple[int, dict]:
    if not isinstance(body, dict) or not isinstance(body.get("overrides"), dict):
        return _error(400, "body must be an object with an 'overrides' object")
    case = state.document.case
    overrides: dict[str, float] = {}
    for node_id, value in body["overrides"].items():
        if not case.has_node(node_id):
            return _error(404, f"unknown node {node_id!r}")
        if not case.is_leaf(node_id):
            return _error(400, f"node {node_id!r} is not a leaf")
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return _error(400, f"override for {node_id!r} must be a number")
        if not 0.0 <= value <= 1.0:
            return _error(400, f"override for {node_id!r} outside [0, 1]")
        overrides[node_id] = float(value)
    result = propagate(case, overrides)
    payload = propagation_payload(case, result)
    payload["overrides"] = overrides
    return 200, payload


def _handle_bbn_query(state: ServiceState, body: Any) -> tuple[int, dict]:
    if not isinstance(body, dict):
        return _error(400, "body must be an object")
    name = body.get("network")
    target = body.get("target")
    evidence = body.get("evidence", {})
    if not isinstance(name, str) or not isinstance(target, str):
        return _error(400, "'network' and 'target' must be strings")
    if not isinstance(evidence, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in evidence.items()
    ):
        return _error(400, "'evidence' must map variable names to state names")
    net = state.document.networks.get(name)
    if net is None:
        return _error(404, f"unknown network {name!r}")
    if not net.has_variable(target):
        return _error(404, f"unknown variable {target!r}")
    for variable, value in evidence.items():
        if not net.has_variable(variable):
            return _error(404, f"unknown variable {variable!r}")
        if value not in net.variable(variable).states:
            return _error(404, f"variable {variable!r} has no state {value!r}")
    if target in evidence:
        return _error(400, f"target {target!r} is fixed by the evidence")
    try:
        distribution = query(net, target, evidence)
    except ImpossibleEvidenceError as exc:
        return _error(422, str(exc))
    return 200, {
        "network": name,
        "target": target,
        "evidence": evidence,
        "distribution": distribution,
    }


def handle_api(
    state: ServiceState,
    method: str,
    path: str,
    params: Mapping[str, str],
    body: Any = None,
) -> tuple[int, dict]:
    """Dispatch one API request; returns (HTTP status, JSON payload)."""
    case = state.document.case
    if path == "/api/health":
        if method != "GET":
            return _error(405, "method not allowed")
        return 200, {"status": "ok"}
    if path == "/api/case":
        if method != "GET":
            return _error(405, "method not allowed")
        return 200, {
            "document": document_to_dict(state.document),
            "baseline": propagation_payload(case, state.baseline),
        }
    if path == "/api/whatif":
        if method != "POST":
            return _error(405, "method not allowed")
        return _handle_whatif(state, body)
    if path == "/api/sensitivity":
        if method != "GET":
            return _error(405, "method not allowed")
        raw = params.get("delta", "0.01")
        try:
            delta = float(raw)
        except ValueError:
            return _error(400, f"delta {raw!r} is not a number")
        try:
            entries = sensitivity(case, delta)
        except ValueError as exc:
            return _error(400, str(exc))
        return 200, sensitivity_payload(delta, entries)
    if path == "/api/bounds":
        if method != "GET":
            return _error(405, "method not allowed")
        block_id = params.get("block")
        if block_id is not None:
            if not case.has_block(block_id):
                return _error(404, f"unknown block {block_id!r}")
            try:
                bounds = dependence_bounds(case, block_id, state.baseline)
            except ValueError as exc:
                return _error(400, str(exc))
            return 200, {"blocks": [bounds_payload(bounds)]}
        payload = [
            bounds_payload(dependence_bounds(case, block.id, state.baseline))
            for block in case.blocks
            if block.kind in MULTI_SUBCLAIM_KINDS
        ]
        return 200, {"blocks": payload}
    if path == "/api/lint":
        if method != "GET":
            return _error(405, "method not allowed")
        return 200, lint_payload(lint(case))
    if path == "/api/bbn/query":
        if method != "POST":
            return _error(405, "method not allowed")
        return _handle_bbn_query(state, body)
    return _error(404, f"no route {path!r}")


class _Handler(BaseHTTPRequestHandler):
    server: "CaseServer"

    # The service is a local facade; per-request logging is noise.
    def log_message(self, format: str, *args: Any) -> None:
        pass

    def _send_json(self, status: int, payload: dict) -> None:
        data = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def _read_body(self) -> tuple[bool, Any]:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return True, None
        try:
            return True, json.loads(raw)
        except json.JSONDecodeError:
            return False, None

    def _dispatch(self, method: str) -> None:
        parts = urlsplit(self.path)
        if parts.path.startswith("/api"):
            ok, body = self._read_body()
            if not ok:
                self._send_json(400, {"error": "body is not valid JSON"})
                return
            params = {
                key: values[-1]
                for key, values in parse_qs(parts.query).items()
            }
            status, payload = handle_api(
                self.server.state, method, parts.path, params, body
            )
            self._send_json(status, payload)
            return
        if method != "GET":
            self._send_json(405, {"error": "method not allowed"})
            return
        self._send_static(parts.path)

    def _send_static(self, path: str) -> None:
        ui_dir = self.server.ui_dir
        if ui_dir is None:
            self._send_json(
                404, {"error": "no UI assets built; the API lives under /api"}
            )
            return
        relative = path.lstrip("/") or "index.html"
        target = (ui_dir / relative).resolve()
        if not str(target).startswith(str(ui_dir.resolve()) + "/") and target != ui_dir.resolve():
            self._send_json(404, {"error": "not found"})
            return
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            self._send_json(404, {"error": "not found"})
            return
        content_type = (
            mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        )
        data = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def do_GET(self) -> None:
        self._dispatch("GET")

    def do_POST(self) -> None:
        self._dispatch("POST")


class CaseServer(ThreadingHTTPServer):
    """HTTP server bound to one immutable case document."""

    def __init__(
        self,
        address: tuple[str, int],
        state: ServiceState,
        ui_dir: Optional[Path] = None,
    ):
        super().__init__(address, _Handler)
        self.state = state
        self.ui_dir = ui_dir


def create_server(
    document: CaseDocument,
    host: str = "127.0.0.1",
    port: int = 8080,
    ui_dir: Optional[Path] = None,
) -> CaseServer:
    """Build a server for the document; caller runs serve_forever()."""
    state = ServiceState.from_document(document)
    if ui_dir is not None and not ui_dir.is_dir():
        ui_dir = None
    return CaseServer((host, port), state, ui_dir)
