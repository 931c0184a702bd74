"""HTTP facade over mental models and dialogue sessions.

Endpoints (JSON in, JSON out; errors as ``{error, detail}``):

    GET  /models                              list loaded models
    GET  /models/{name}/graph                 entity/relation graph; large
         ?anchor=&radius=&page=               models page by BFS neighborhood
    POST /sessions        {model}             open a dialogue session
    POST /sessions/{id}/ask {type,target,attribute?}   ask why/how/reset
    GET  /sessions/{id}/history               transcript export

Answers are produced by the dialogue module itself, so scripted HTTP clients
see exactly what a terminal session would (timestamps aside). Asks on one
session are serialized through a per-session lock; distinct sessions proceed
concurrently.
"""

from __future__ import annotations

import logging
import threading
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .core import MentalModel
from .dialogue import Session, ask_structured, export_transcript, start_session, turn_payload
from .errors import (
    MentalModelError,
    ParseError,
    TargetNotYetPresented,
    UnknownAttribute,
    UnknownEntity,
    UnknownModel,
    UnknownSession,
)

logger = logging.getLogger("mentalmodel.service")

PAGE_THRESHOLD = 5000
PAGE_SIZE = 1000


def infer_root_output(mm: MentalModel) -> int:
    """Pick the entity a session should present first.

    The output of a computation is explained but never explains anything
    further, so the first entity that appears as an explanandum and never as
    an explanan is taken as the root. Falls back to the first entity.
    """
    if not mm.entities:
        raise UnknownEntity("mental model has no entities")
    explanans = {rel.explanan.id for rel in mm.relations}
    explananda = {rel.explanandum.id for rel in mm.relations}
    for entity in mm.entities:
        if entity.id in explananda and entity.id not in explanans:
            return entity.id
    return mm.entities[0].id


@dataclass
class LoadedModel:
    name: str
    mental_model: MentalModel
    root_output: int


@dataclass
class SessionStore:
    """Loaded mental models plus live sessions with their turn locks."""

    models: dict[str, LoadedModel] = field(default_factory=dict)
    sessions: dict[str, tuple[Session, threading.Lock]] = field(default_factory=dict)

    def add_model(self, name: str, mm: MentalModel, root_output: int | None = None) -> LoadedModel:
        loaded = LoadedModel(
            name=name,
            mental_model=mm,
            root_output=infer_root_output(mm) if root_output is None else root_output,
        )
        self.models[name] = loaded
        return loaded

    def model(self, name: str) -> LoadedModel:
        if name not in self.models:
            raise UnknownModel(f"no model named {name!r}")
        return self.models[name]

    def create_session(self, model_name: str) -> Session:
        loaded = self.model(model_name)
        session = start_session(loaded.mental_model, loaded.root_output)
        session.id = uuid.uuid4().hex
        self.sessions[session.id] = (session, threading.Lock())
        return session

    def session(self, session_id: str) -> tuple[Session, threading.Lock]:
        if session_id not in self.sessions:
            raise UnknownSession(f"no session {session_id!r}")
        return self.sessions[session_id]


def _error_status(exc: MentalModelError) -> int:
    if isinstance(exc, (UnknownModel, UnknownSession)):
        return 404
    if isinstance(exc, TargetNotYetPresented):
        return 422
    return 400


def _graph_nodes_edges(mm: MentalModel, entity_ids: set[int] | None = None) -> tuple[list, list]:
    nodes = [
        {
            "id": e.id,
            "kind": e.kind.name,
            "name": e.name,
            "attributes": dict(e.attributes),
        }
        for e in mm.entities
        if entity_ids is None or e.id in entity_ids
    ]
    edges = [
        {
            "id": r.id,
            "template": r.template.name,
            "reason": r.template.reason,
            "explanan": r.explanan.id,
            "explanandum": r.explanandum.id,
        }
        for r in mm.relations
        if entity_ids is None
        or (r.explanan.id in entity_ids and r.explanandum.id in entity_ids)
    ]
    return nodes, edges


def _bfs_neighborhood(mm: MentalModel, anchor: int, radius: int) -> list[int]:
    adjacency: dict[int, list[int]] = {}
    for rel in mm.relations:
        adjacency.setdefault(rel.explanandum.id, []).append(rel.explanan.id)
        adjacency.setdefault(rel.explanan.id, []).append(rel.explanandum.id)
    seen = {anchor: 0}
    order = [anchor]
    cursor = 0
    while cursor < len(order):
        current = order[cursor]
        cursor += 1
        depth = seen[current]
        if depth == radius:
            continue
        for neighbor in adjacency.get(current, []):
            if neighbor not in seen:
                seen[neighbor] = depth + 1
                order.append(neighbor)
    return order


def create_app(store: SessionStore) -> FastAPI:
    app = FastAPI(title="mentalmodel", docs_url=None, redoc_url=None)

    @app.exception_handler(MentalModelError)
    async def engine_error(request: Request, exc: MentalModelError):
        return JSONResponse(
            status_code=_error_status(exc),
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.exception_handler(RequestValidationError)
    async def malformed(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400, content={"error": "MalformedRequest", "detail": str(exc)}
        )

    @app.middleware("http")
    async def log_requests(request: Request, call_next):
        response = await call_next(request)
        logger.info("%s %s -> %d", request.method, request.url.path, response.status_code)
        return response

    @app.get("/models")
    def list_models():
        return {
            "models": [
                {
                    "name": loaded.name,
                    "kinds": len(loaded.mental_model.kinds),
                    "entities": len(loaded.mental_model.entities),
                    "relations": len(loaded.mental_model.relations),
                    "models": len(loaded.mental_model.models),
                    "root_output": loaded.root_output,
                }
                for loaded in store.models.values()
            ]
        }

    @app.get("/models/{name}/graph")
    def get_graph(name: str, anchor: str | None = None, radius: int = 1, page: int = 0):
        loaded = store.model(name)
        mm = loaded.mental_model
        total = len(mm.entities)
        if total <= PAGE_THRESHOLD and anchor is None:
            nodes, edges = _graph_nodes_edges(mm)
            return {"name": name, "paged": False, "total_nodes": total,
                    "nodes": nodes, "edges": edges}
        anchor_id = loaded.root_output if anchor is None else _resolve_anchor(mm, anchor)
        neighborhood = _bfs_neighborhood(mm, anchor_id, max(radius, 0))
        page = max(page, 0)
        start, stop = page * PAGE_SIZE, (page + 1) * PAGE_SIZE
        page_ids = neighborhood[start:stop]
        nodes, edges = _graph_nodes_edges(mm, set(page_ids))
        # keep node order = BFS order, not entity insertion order
        by_id = {n["id"]: n for n in nodes}
        return {
            "name": name,
            "paged": True,
            "anchor": anchor_id,
            "radius": radius,
            "page": page,
            "page_size": PAGE_SIZE,
            "total_nodes": total,
            "neighborhood_size": len(neighborhood),
            "has_more": stop < len(neighborhood),
            "nodes": [by_id[i] for i in page_ids],
            "edges": edges,
        }

    @app.post("/sessions")
    def create_session(body: dict):
        model_name = body.get("model")
        if not isinstance(model_name, str):
            raise ParseError("body must carry a 'model' name", position=0)
        session = store.create_session(model_name)
        return {
            "session_id": session.id,
            "turn": turn_payload(session, session.transcript[0]),
        }

    @app.post("/sessions/{session_id}/ask")
    def ask(session_id: str, body: dict):
        session, lock = store.session(session_id)
        question_type = body.get("type")
        if question_type not in ("why", "how", "reset"):
            raise ParseError(f"bad question type {question_type!r}", position=0)
        target = body.get("target")
        attribute = body.get("attribute")
        if target is not None and not isinstance(target, (str, int)):
            raise ParseError("target must be an entity name or rel:<n>", position=0)
        if attribute is not None and not isinstance(attribute, str):
            raise ParseError("attribute must be a string", position=0)
        with lock:
            turn = ask_structured(session, question_type, target, attribute)
            return turn_payload(session, turn)

    @app.get("/sessions/{session_id}/history")
    def get_history(session_id: str):
        session, lock = store.session(session_id)
        with lock:
            return export_transcript(session)

    return app


def _resolve_anchor(mm: MentalModel, anchor: str) -> int:
    if anchor.isdigit():
        entity = mm.entity(int(anchor))
        if entity is not None:
            return entity.id
    named = mm.entities_named(anchor)
    if not named:
        raise UnknownEntity(f"no entity named {anchor!r}")
    return named[0].id
