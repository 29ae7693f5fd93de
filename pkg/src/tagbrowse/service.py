"""HTTP service exposing browsing sessions over the engine and caches.

The service is a pure view layer: every browsing state it reports is
exactly what the library computed, and the per-action latency it
reports is measured with the same discipline as the benchmark, so
numbers shown in a UI are comparable to bench.csv rows.
"""

from __future__ import annotations

import threading
import time
import uuid
from typing import Literal, Mapping

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from .caches import STRATEGY_NAMES, Strategy, make_strategy
from .collection import Collection
from .engine import BrowsingState, InvalidActionError, UserAction
from .simulator import rank_selectable

DEFAULT_SESSION_TTL_SECONDS = 30 * 60
DEFAULT_PAGE_SIZE = 20


class CreateSessionRequest(BaseModel):
    collection: str
    strategy: Literal["none", "query", "resource"] = "none"


class ActionRequest(BaseModel):
    op: Literal["add", "remove"]
    tag: str


class _ServiceError(Exception):
    def __init__(self, status: int, code: str, message: str, detail: object = None):
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail


class _Session:
    """One browsing session: fixed strategy, serialized action application."""

    def __init__(self, collection_name: str, collection: Collection,
                 strategy: Strategy) -> None:
        self.id = uuid.uuid4().hex
        self.collection_name = collection_name
        self.collection = collection
        self.strategy = strategy
        self.state: BrowsingState = strategy.begin(collection)
        self.lock = threading.Lock()
        self.last_access = time.monotonic()
        self.last_action_us: float | None = None
        self.last_action_hit: bool | None = None
        self.timing_log_us: list[float] = []

    def apply(self, action: UserAction) -> None:
        t0 = time.perf_counter_ns()
        state, hit = self.strategy.apply(self.collection, self.state, action)
        elapsed_us = (time.perf_counter_ns() - t0) / 1000.0
        self.state = state
        self.last_action_us = elapsed_us
        self.last_action_hit = hit
        self.timing_log_us.append(elapsed_us)


class _SessionStore:
    def __init__(self, ttl_seconds: float) -> None:
        self._sessions: dict[str, _Session] = {}
        self._lock = threading.Lock()
        self._ttl = ttl_seconds

    def put(self, session: _Session) -> None:
        with self._lock:
            self._purge()
            self._sessions[session.id] = session

    def get(self, session_id: str) -> _Session:
        with self._lock:
            self._purge()
            session = self._sessions.get(session_id)
            if session is None:
                raise _ServiceError(404, "unknown_session",
                                    f"no session with id {session_id!r}")
            session.last_access = time.monotonic()
            return session

    def delete(self, session_id: str) -> None:
        with self._lock:
            if session_id not in self._sessions:
                raise _ServiceError(404, "unknown_session",
                                    f"no session with id {session_id!r}")
            del self._sessions[session_id]

    def _purge(self) -> None:
        now = time.monotonic()
        expired = [sid for sid, s in self._sessions.items()
                   if now - s.last_access > self._ttl]
        for sid in expired:
            del self._sessions[sid]


def _session_view(session: _Session, page: int, page_size: int) -> dict:
    c = session.collection
    state = session.state
    ranked = rank_selectable(c, state)
    total = len(state.filtered)
    total_pages = max(1, -(-total // page_size))
    page = min(max(1, page), total_pages)
    start = (page - 1) * page_size
    page_ids = list(state.filtered)[start:start + page_size]
    return {
        "id": session.id,
        "collection": session.collection_name,
        "strategy": session.strategy.name,
        "activeTags": [c.tag_label(t) for t in state.active_order],
        "selectableTags": [{"label": c.tag_label(t), "count": n} for t, n in ranked],
        "resources": [
            {"id": c.resources[r].external_id, "label": c.resources[r].label,
             "uri": c.resources[r].uri}
            for r in page_ids
        ],
        "totalResources": total,
        "page": page,
        "pageSize": page_size,
        "totalPages": total_pages,
        "lastActionMicros": session.last_action_us,
        "lastActionHit": session.last_action_hit,
        "cacheStats": session.strategy.stats.as_dict(),
    }


def create_app(collections: Mapping[str, Collection],
               session_ttl_seconds: float = DEFAULT_SESSION_TTL_SECONDS,
               cors_origins: tuple[str, ...] = ("*",)) -> FastAPI:
    """Build the service over a fixed set of read-only collections."""
    app = FastAPI(title="tagbrowse", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = _SessionStore(session_ttl_seconds)

    @app.exception_handler(_ServiceError)
    async def service_error_handler(_req: Request, exc: _ServiceError):
        return JSONResponse(status_code=exc.status,
                            content={"error": exc.code, "message": exc.message,
                                     "detail": exc.detail})

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(_req: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400,
                            content={"error": "invalid_request",
                                     "message": "malformed request body",
                                     "detail": exc.errors()})

    @app.get("/api/collections")
    def list_collections():
        return {"collections": [
            {"name": name, "resources": c.n_resources, "tags": c.n_tags}
            for name, c in collections.items()
        ]}

    @app.post("/api/sessions", status_code=201)
    def create_session(body: CreateSessionRequest,
                       page: int = 1, page_size: int = DEFAULT_PAGE_SIZE):
        collection = collections.get(body.collection)
        if collection is None:
            raise _ServiceError(404, "unknown_collection",
                                f"no collection named {body.collection!r}",
                                {"available": sorted(collections)})
        session = _Session(body.collection, collection, make_strategy(body.strategy))
        store.put(session)
        return _session_view(session, page, page_size)

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str, page: int = 1,
                    page_size: int = DEFAULT_PAGE_SIZE):
        session = store.get(session_id)
        with session.lock:
            return _session_view(session, page, page_size)

    @app.post("/api/sessions/{session_id}/actions")
    def apply_action(session_id: str, body: ActionRequest,
                     page: int = 1, page_size: int = DEFAULT_PAGE_SIZE):
        session = store.get(session_id)
        with session.lock:
            tag_id = session.collection.tag_id_by_label.get(body.tag)
            if tag_id is None:
                raise _ServiceError(409, "invalid_action",
                                    f"unknown tag label {body.tag!r}",
                                    {"op": body.op, "tag": body.tag,
                                     "reason": "unknown_tag"})
            try:
                session.apply(UserAction(body.op, tag_id))
            except InvalidActionError as exc:
                raise _ServiceError(409, "invalid_action", str(exc),
                                    {"op": body.op, "tag": body.tag,
                                     "reason": "not_applicable"}) from exc
            return _session_view(session, page, page_size)

    @app.delete("/api/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        store.delete(session_id)
        return Response(status_code=204)

    return app


__all__ = ["create_app", "DEFAULT_SESSION_TTL_SECONDS", "STRATEGY_NAMES"]
