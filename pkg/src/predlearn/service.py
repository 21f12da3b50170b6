"""HTTP session manager for interactive learning runs.

Sessions are persisted as one JSON file each (payload + answer list);
engine state is never serialized -- it is rebuilt by replaying the answers
into a fresh session, which the determinism contract makes exact. All
engine work happens on the request path; per-session locks serialize
mutation.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .core import FamilyError, GuardExceeded, load_family
from .learner import LearnSession, TeacherError
from .synth import (
    Chart,
    chart_from_csv,
    chart_from_values,
    program_from_formula,
    seed_family,
    witness_to_chart,
)
from .varineq import VarIneqFamily

KINDS = ("pattern", "family-or", "family-and")


@dataclass
class SessionRecord:
    id: str
    kind: str
    payload: dict
    answers: list = field(default_factory=list)
    keys: dict = field(default_factory=dict)  # idempotency key -> stored response
    created: float = field(default_factory=time.time)
    updated: float = field(default_factory=time.time)

    def to_jsonable(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "payload": self.payload,
            "answers": self.answers,
            "keys": self.keys,
            "created": self.created,
            "updated": self.updated,
        }


def _build_engine(record: SessionRecord) -> tuple[LearnSession, Optional[Chart]]:
    """Fresh engine for a record, with answers replayed. Returns the seed
    chart for pattern sessions (queries are rendered against it)."""
    if record.kind == "pattern":
        chart = chart_from_values(record.payload["chart"])
        family = seed_family(chart)
        session = LearnSession(family, "and")
    else:
        family = load_family(record.payload["family"])
        mode = "or" if record.kind == "family-or" else "and"
        session = LearnSession(family, mode)
        chart = None
    for bit in record.answers:
        session.submit_answer(int(bit))
    return session, chart


def _query_bound(record: SessionRecord, session: LearnSession) -> int:
    if record.kind == "pattern":
        k = session.family.domain_dim
        return k * k
    if isinstance(session.family, VarIneqFamily) and session.mode == "and":
        return session.family.size
    return session.family.size * max(session.max_descendants_seen, 1)


class SessionStore:
    def __init__(self, data_dir: str, session_cap: int = 1000):
        self.data_dir = data_dir
        self.session_cap = session_cap
        os.makedirs(data_dir, exist_ok=True)
        self._live: dict[str, tuple[SessionRecord, LearnSession, Optional[Chart]]] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def _path(self, sid: str) -> str:
        return os.path.join(self.data_dir, f"{sid}.json")

    def _persist(self, record: SessionRecord) -> None:
        record.updated = time.time()
        fd, tmp = tempfile.mkstemp(dir=self.data_dir, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(record.to_jsonable(), fh)
        os.replace(tmp, self._path(record.id))

    def lock(self, sid: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(sid, threading.Lock())

    def create(self, kind: str, payload: dict) -> str:
        existing = [f for f in os.listdir(self.data_dir) if f.endswith(".json")]
        if len(existing) >= self.session_cap:
            raise GuardExceeded(f"session cap {self.session_cap} reached")
        sid = uuid.uuid4().hex[:16]
        record = SessionRecord(id=sid, kind=kind, payload=payload)
        session, chart = _build_engine(record)  # validates the payload
        self._persist(record)
        self._live[sid] = (record, session, chart)
        return sid

    def get(self, sid: str) -> tuple[SessionRecord, LearnSession, Optional[Chart]]:
        if sid in self._live:
            return self._live[sid]
        path = self._path(sid)
        if not os.path.exists(path):
            raise KeyError(sid)
        with open(path) as fh:
            d = json.load(fh)
        record = SessionRecord(
            id=d["id"],
            kind=d["kind"],
            payload=d["payload"],
            answers=list(d.get("answers", [])),
            keys=dict(d.get("keys", {})),
            created=d.get("created", 0.0),
            updated=d.get("updated", 0.0),
        )
        session, chart = _build_engine(record)
        self._live[sid] = (record, session, chart)
        return self._live[sid]

    def persist(self, record: SessionRecord) -> None:
        self._persist(record)


# ---------------------------------------------------------------------------
# response shaping
# ---------------------------------------------------------------------------

def _query_payload(record: SessionRecord, session: LearnSession) -> Optional[dict]:
    kind, payload = session.step()
    if kind == "done":
        return None
    out = {
        "seq": session.query_count,
        "assignment": [str(v) for v in payload],
        "progress": {
            "queries": session.query_count,
            "bound": _query_bound(record, session),
        },
    }
    if record.kind == "pattern":
        out["chart"] = witness_to_chart(payload).to_jsonable()
    return out


def _result_payload(record: SessionRecord, session: LearnSession) -> dict:
    assert session.result is not None
    out = {
        "status": "done",
        "kind": record.kind,
        "members": list(session.result.members),
        "query_count": session.query_count,
        "class_mismatch": session.class_mismatch,
    }
    if record.kind == "pattern":
        program = program_from_formula(session.family, session.result.members)
        out["program"] = program.source_text
        out["sidecar"] = program.sidecar()
    return out


class CreateSessionBody(BaseModel):
    kind: str
    family: Optional[dict] = None
    chart: Optional[list] = None
    csv: Optional[str] = None


class AnswerBody(BaseModel):
    answer: int
    key: str
    seq: Optional[int] = None


def create_app(data_dir: str, session_cap: int = 1000, ui_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="predlearn session service")
    store = SessionStore(data_dir, session_cap)
    app.state.store = store

    def _get_or_404(sid: str):
        try:
            return store.get(sid)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown session {sid}")

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        if body.kind not in KINDS:
            raise HTTPException(status_code=422, detail=f"kind must be one of {KINDS}")
        try:
            if body.kind == "pattern":
                if body.csv is not None:
                    chart = chart_from_csv(body.csv)
                elif body.chart is not None:
                    chart = chart_from_values(body.chart)
                else:
                    raise FamilyError("pattern session needs 'chart' or 'csv'")
                payload = {"chart": [str(v) for v in chart.values]}
            else:
                if body.family is None:
                    raise FamilyError("family session needs a 'family' definition")
                load_family(body.family)  # validate before persisting
                payload = {"family": body.family}
            sid = store.create(body.kind, payload)
        except (FamilyError, GuardExceeded) as e:
            raise HTTPException(status_code=422, detail=str(e))
        record, session, _chart = store.get(sid)
        return {
            "id": sid,
            "kind": body.kind,
            "status": session.status,
            "query": _query_payload(record, session),
        }

    @app.get("/sessions/{sid}/query")
    def get_query(sid: str):
        record, session, _chart = _get_or_404(sid)
        q = _query_payload(record, session)
        if q is None:
            raise HTTPException(status_code=409, detail="session is done")
        return q

    @app.post("/sessions/{sid}/answer")
    def post_answer(sid: str, body: AnswerBody):
        record, session, _chart = _get_or_404(sid)
        with store.lock(sid):
            if body.key in record.keys:
                return JSONResponse(record.keys[body.key])
            if session.status == "done":
                raise HTTPException(status_code=409, detail="session is done")
            if body.seq is not None and body.seq != session.query_count:
                raise HTTPException(
                    status_code=409,
                    detail=f"answer targets query {body.seq} but query "
                    f"{session.query_count} is pending",
                )
            if body.answer not in (0, 1):
                raise HTTPException(status_code=422, detail="answer must be 0 or 1")
            try:
                session.submit_answer(body.answer)
            except TeacherError as e:
                raise HTTPException(status_code=409, detail=str(e))
            record.answers.append(body.answer)
            if session.status == "done":
                response = {"status": "done", "result": _result_payload(record, session)}
            else:
                response = {
                    "status": "running",
                    "query": _query_payload(record, session),
                }
            record.keys[body.key] = response
            store.persist(record)
            return JSONResponse(response)

    @app.get("/sessions/{sid}/result")
    def get_result(sid: str):
        record, session, _chart = _get_or_404(sid)
        if session.status != "done":
            raise HTTPException(status_code=409, detail="session still running")
        return _result_payload(record, session)

    @app.get("/sessions/{sid}/transcript")
    def get_transcript(sid: str):
        _record, session, _chart = _get_or_404(sid)
        return {"entries": [e.to_jsonable() for e in session.transcript]}

    if ui_dir and os.path.isdir(ui_dir):
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
