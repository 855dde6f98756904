"""JSON-over-HTTP API for a frozen model, backing the interactive board UI.

Endpoints (all bodies JSON, UTF-8):

* ``GET  /model/info``                      architecture, training config, checkpoint hash
* ``POST /sample      {seed?, count?}``     sample candidates from the prior
* ``POST /decode      {latent, k?}``        decode one latent vector
* ``POST /encode      {holds}``             posterior mean/logvar for a hold set
* ``POST /interpolate {a, b, steps}``       decode along a latent segment

The server is stateless: every response is a pure function of the request,
the frozen model, and the corpus, so replaying a request reproduces the
response byte for byte. Requests never mutate server state, which makes
concurrent handling trivial (ThreadingHTTPServer). CORS is wide open since
the UI runs on a separate origin.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np

from .board import Problem, infer_roles, parse_position, problem_to_vector, vector_to_problem
from .data import Corpus, problem_to_record
from .errors import DataError, RouteGenError
from .generation import (
    Candidate,
    GenConfig,
    ValidationReport,
    choose_k,
    generate_batch,
    is_duplicate,
    select_holds,
    validate_route,
)
from .vae import VaeModel, decode, encode


@dataclass
class ApiSession:
    """Everything a request handler needs: the frozen model, the corpus
    used for duplicate checks, and generation defaults."""

    model: VaeModel | None = None
    corpus: Corpus | None = None
    info: dict = field(default_factory=dict)
    min_holds: int = 6
    reach_limit: float = 5.0


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


def _parse_reach_limit(session: ApiSession, body: dict) -> float:
    raw = body.get("reach_limit")
    if raw is None:
        return session.reach_limit
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ApiError(400, "reach_limit must be a number")
    if not (0.0 < raw <= 30.0):
        raise ApiError(400, "reach_limit must lie in (0, 30]")
    return float(raw)


def _candidate_payload(session: ApiSession, problem: Problem,
                       latent: np.ndarray, probs: np.ndarray,
                       reach_limit: float | None = None) -> dict:
    report = validate_route(problem, min_holds=session.min_holds,
                            reach_limit=session.reach_limit if reach_limit is None
                            else reach_limit)
    duplicate = None
    if session.corpus is not None and len(session.corpus) > 0:
        duplicate = is_duplicate(problem, session.corpus)
    report = ValidationReport(
        min_holds_ok=report.min_holds_ok,
        finish_ok=report.finish_ok,
        start_ok=report.start_ok,
        reachable_ok=report.reachable_ok,
        duplicate_of=duplicate,
        details=report.details,
    )
    rec = problem_to_record(problem)
    return {
        "holds": rec["holds"],
        "latent": [float(v) for v in latent],
        "probs": [float(v) for v in probs],
        "report": report.to_record(),
    }


def _require_model(session: ApiSession) -> VaeModel:
    if session.model is None:
        raise ApiError(503, "no model loaded")
    return session.model


def _parse_latent(session: ApiSession, raw, name: str = "latent") -> np.ndarray:
    model = _require_model(session)
    if not isinstance(raw, list) or len(raw) != model.latent_dim:
        got = len(raw) if isinstance(raw, list) else type(raw).__name__
        raise ApiError(400, f"{name} must be a list of {model.latent_dim} numbers, got {got}")
    try:
        z = np.asarray([float(v) for v in raw], dtype=np.float64)
    except (TypeError, ValueError):
        raise ApiError(400, f"{name} must contain only numbers") from None
    if not np.all(np.isfinite(z)):
        raise ApiError(400, f"{name} must contain only finite values")
    return z


def _decode_candidate(session: ApiSession, z: np.ndarray, k_raw,
                      reach_limit: float | None = None) -> dict:
    model = _require_model(session)
    probs = decode(model, z)
    if k_raw is not None:
        if not isinstance(k_raw, int) or isinstance(k_raw, bool):
            raise ApiError(400, "k must be an integer")
        if not (1 <= k_raw <= model.input_dim):
            raise ApiError(400, f"k must lie in [1, {model.input_dim}]")
        k = k_raw
    else:
        k = choose_k(probs, min_holds=session.min_holds)
    bits = select_holds(probs, k)
    problem = vector_to_problem(bits, name="decoded")
    return _candidate_payload(session, problem, z, probs, reach_limit=reach_limit)


def _handle_sample(session: ApiSession, body: dict) -> dict:
    model = _require_model(session)
    seed = body.get("seed", 0)
    count = body.get("count", 1)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ApiError(400, "seed must be an integer")
    if not isinstance(count, int) or isinstance(count, bool) or not (1 <= count <= 500):
        raise ApiError(400, "count must be an integer in [1, 500]")
    config = GenConfig(count=count, seed=seed, min_holds=session.min_holds,
                       reach_limit=_parse_reach_limit(session, body))
    candidates = generate_batch(model, session.corpus, config)
    return {
        "seed": seed,
        "candidates": [
            _sample_payload(session, c) for c in candidates
        ],
    }


def _sample_payload(session: ApiSession, candidate: Candidate) -> dict:
    rec = problem_to_record(candidate.problem)
    return {
        "holds": rec["holds"],
        "latent": [float(v) for v in candidate.latent],
        "probs": [float(v) for v in candidate.probs],
        "report": candidate.report.to_record(),
    }


def _handle_decode(session: ApiSession, body: dict) -> dict:
    z = _parse_latent(session, body.get("latent"))
    return _decode_candidate(session, z, body.get("k"),
                             reach_limit=_parse_reach_limit(session, body))


def _handle_encode(session: ApiSession, body: dict) -> dict:
    model = _require_model(session)
    raw = body.get("holds")
    if not isinstance(raw, list) or not raw:
        raise ApiError(400, "holds must be a non-empty list of position labels")
    try:
        coords = [parse_position(str(label)) for label in raw]
        problem = Problem(name="query", holds=tuple(infer_roles(coords)))
    except RouteGenError as e:
        raise ApiError(400, str(e)) from None
    mu, logvar = encode(model, problem_to_vector(problem).astype(np.float64))
    return {
        "mu": [float(v) for v in mu],
        "logvar": [float(v) for v in logvar],
    }


def _handle_interpolate(session: ApiSession, body: dict) -> dict:
    a = _parse_latent(session, body.get("a"), name="a")
    b = _parse_latent(session, body.get("b"), name="b")
    steps = body.get("steps")
    if not isinstance(steps, int) or isinstance(steps, bool) or steps < 2:
        raise ApiError(400, "steps must be an integer >= 2")
    if steps > 200:
        raise ApiError(400, "steps must be <= 200")
    reach_limit = _parse_reach_limit(session, body)
    out = []
    for i in range(steps):
        t = i / (steps - 1)
        z = (1.0 - t) * a + t * b
        entry = _decode_candidate(session, z, body.get("k"), reach_limit=reach_limit)
        entry["t"] = t
        out.append(entry)
    return {"candidates": out}


def _handle_info(session: ApiSession) -> dict:
    model = _require_model(session)
    payload = {"architecture": model.architecture()}
    payload.update(session.info)
    return payload


def handle_request(session: ApiSession, method: str, path: str,
                   body: bytes) -> tuple[int, dict]:
    """Pure request dispatcher: ``(status, payload)`` for a single request.

    The HTTP layer below is a thin wrapper around this, and tests call it
    directly without sockets.
    """
    try:
        if method == "GET" and path == "/model/info":
            return 200, _handle_info(session)
        if method == "POST":
            try:
                obj = json.loads(body.decode("utf-8")) if body else {}
            except (json.JSONDecodeError, UnicodeDecodeError):
                raise ApiError(400, "request body must be valid JSON") from None
            if not isinstance(obj, dict):
                raise ApiError(400, "request body must be a JSON object")
            if path == "/sample":
                return 200, _handle_sample(session, obj)
            if path == "/decode":
                return 200, _handle_decode(session, obj)
            if path == "/encode":
                return 200, _handle_encode(session, obj)
            if path == "/interpolate":
                return 200, _handle_interpolate(session, obj)
        return 404, {"error": f"no such endpoint: {method} {path}"}
    except ApiError as e:
        return e.status, {"error": e.message}
    except DataError as e:
        return 400, {"error": str(e)}


def encode_payload(payload: dict) -> bytes:
    """Canonical JSON bytes (sorted keys, no whitespace) so identical
    payloads serialize identically."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")


class _Handler(BaseHTTPRequestHandler):
    server_version = "routegen"
    protocol_version = "HTTP/1.1"

    def _respond(self, status: int, payload: dict) -> None:
        blob = encode_payload(payload)
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(blob)))
        self._cors()
        self.end_headers()
        self.wfile.write(blob)

    def _cors(self) -> None:
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def do_OPTIONS(self):  # noqa: N802 (http.server naming)
        self.send_response(204)
        self._cors()
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):  # noqa: N802
        status, payload = handle_request(self.server.session, "GET", self.path, b"")
        self._respond(status, payload)

    def do_POST(self):  # noqa: N802
        length = int(self.headers.get("Content-Length") or 0)
        body = self.rfile.read(length) if length else b""
        status, payload = handle_request(self.server.session, "POST", self.path, body)
        self._respond(status, payload)

    def log_message(self, fmt, *args):
        if self.server.verbose:
            super().log_message(fmt, *args)


class ApiServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, session: ApiSession, host: str = "127.0.0.1",
                 port: int = 8080, verbose: bool = False):
        super().__init__((host, port), _Handler)
        self.session = session
        self.verbose = verbose


def serve(session: ApiSession, host: str = "127.0.0.1", port: int = 8080,
          verbose: bool = True) -> ApiServer:
    """Create a server bound to ``host:port`` (call ``serve_forever`` on it)."""
    return ApiServer(session, host=host, port=port, verbose=verbose)
