"""HTTP session service exposing the assistant loop to the web UI.

Endpoints: list assistants, create a session (upload or reference
files), fetch the current recommendation, post a choice index, accept,
download the result.  All state transitions delegate to the core
Session; handlers may run concurrently and per-session operations are
serialized by a lock.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from .core import (
    BindingError,
    ConstraintParseError,
    NoRecommendationError,
    Registry,
    Session,
    SessionAcceptedError,
    StaleChoiceError,
    UnknownAssistantError,
    WrangleError,
    session_init,
)
from .table import Preview, preview as table_preview, render_csv

MAX_UPLOAD_BYTES = 50 * 1024 * 1024

DEFAULT_PORT = int(os.environ.get("WRANGLE_PORT", "8787"))


class SessionStore:
    def __init__(self, data_dir: str | None = None) -> None:
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._store_lock = threading.Lock()
        self.data_dir = Path(data_dir) if data_dir else None
        if self.data_dir:
            self.data_dir.mkdir(parents=True, exist_ok=True)

    def add(self, session: Session) -> None:
        with self._store_lock:
            self._sessions[session.session_id] = session
            self._locks[session.session_id] = threading.Lock()

    def get(self, session_id: str) -> tuple[Session, threading.Lock]:
        with self._store_lock:
            if session_id not in self._sessions:
                raise KeyError(session_id)
            return self._sessions[session_id], self._locks[session_id]

    def persist_replay(self, session: Session) -> None:
        """Sessions are resurrectable by replaying (bindings, history)."""
        if not self.data_dir:
            return
        payload = {
            "assistant": session.assistant.descriptor.id,
            "bindings": session.bindings,
            "constraints": [
                session.assistant.render_constraint(c) for c in session.interactions
            ],
        }
        path = self.data_dir / f"{session.session_id}.replay.json"
        path.write_text(json.dumps(payload, indent=2), encoding="utf-8")


def _preview_payload(preview: Preview | None) -> dict | None:
    if preview is None:
        return None
    return {
        "header": list(preview.header),
        "rows": [list(row) for row in preview.rows],
        "annotations": list(preview.annotations) if preview.annotations else None,
    }


def _session_resource(session: Session) -> dict[str, Any]:
    resource: dict[str, Any] = {
        "session_id": session.session_id,
        "assistant": session.assistant.descriptor.id,
        "status": session.status,
        "history": list(session.history),
        "constraints": [
            session.assistant.render_constraint(c) for c in session.interactions
        ],
        "input_preview": _preview_payload(_input_preview(session)),
    }
    if session.status == "accepted" and session.result is not None:
        resource["expression_script"] = session.result.script_text
        resource["preview"] = _preview_payload(
            session.result.output.preview(session.preview_rows)
        )
        resource["choices"] = []
        resource["score"] = None
        return resource
    rec = session.step()
    resource["expression_script"] = rec.script
    resource["preview"] = _preview_payload(rec.preview)
    resource["choices"] = [
        {"index": i, "label": c.label} for i, c in enumerate(rec.choices)
    ]
    resource["score"] = rec.score
    resource["warnings"] = list(rec.output.warnings)
    return resource


def _input_preview(session: Session) -> Preview | None:
    data = session.data
    table = getattr(data, "input", None) or getattr(data, "table", None)
    if table is None:
        return None
    return table_preview(table, session.preview_rows)


def create_app(
    registry: Registry | None = None, data_dir: str | None = None
) -> FastAPI:
    if registry is None:
        from .registry import DEFAULT_REGISTRY as registry

    app = FastAPI(title="wrangle", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(data_dir or os.environ.get("WRANGLE_DATA_DIR"))
    app.state.store = store

    def error(status: int, message: str) -> JSONResponse:
        return JSONResponse({"error": message}, status_code=status)

    @app.exception_handler(WrangleError)
    async def _wrangle_error(request: Request, exc: WrangleError):
        if isinstance(exc, UnknownAssistantError):
            return error(404, str(exc))
        if isinstance(exc, (StaleChoiceError, SessionAcceptedError, NoRecommendationError)):
            return error(409, str(exc))
        return error(400, str(exc))

    @app.get("/assistants")
    def list_assistants() -> list[dict]:
        return [
            {
                "id": d.id,
                "display_name": d.display_name,
                "input_slots": list(d.input_slots),
                "constraint_grammar_id": d.constraint_grammar_id,
            }
            for d in registry.descriptors()
        ]

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("multipart/form-data"):
            form = await request.form()
            assistant_id = form.get("assistant")
            constraints = form.getlist("constraint")
            config = json.loads(form.get("config") or "{}")
            bindings: dict[str, str] = {}
            upload_dir = Path(tempfile.mkdtemp(prefix="wrangle-upload-"))
            for key, value in form.multi_items():
                if hasattr(value, "filename") and value.filename:
                    content = await value.read()
                    if len(content) > MAX_UPLOAD_BYTES:
                        return error(400, f"upload for slot {key!r} exceeds 50 MB")
                    target = upload_dir / f"{key}-{Path(value.filename).name}"
                    target.write_bytes(content)
                    bindings[key] = str(target)
                elif key == "binding":
                    slot, _, path = str(value).partition("=")
                    bindings[slot] = path
        else:
            body = await request.json()
            assistant_id = body.get("assistant")
            bindings = body.get("bindings") or {}
            constraints = body.get("constraints") or []
            config = body.get("config") or {}
        if not assistant_id:
            return error(400, "missing assistant id")
        try:
            session = session_init(
                assistant_id,
                bindings,
                registry=registry,
                constraints=constraints,
                **config,
            )
        except (BindingError, ConstraintParseError, TypeError) as exc:
            return error(400, str(exc))
        except FileNotFoundError as exc:
            return error(400, f"unreadable dataset: {exc}")
        store.add(session)
        store.persist_replay(session)
        return _session_resource(session)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        try:
            session, lock = store.get(session_id)
        except KeyError:
            return error(404, f"unknown session {session_id!r}")
        with lock:
            return _session_resource(session)

    @app.post("/sessions/{session_id}/choice")
    async def post_choice(session_id: str, request: Request):
        try:
            session, lock = store.get(session_id)
        except KeyError:
            return error(404, f"unknown session {session_id!r}")
        body = await request.json()
        if "index" not in body:
            return error(400, "missing choice index")
        with lock:
            session.select(int(body["index"]))
            store.persist_replay(session)
            return _session_resource(session)

    @app.post("/sessions/{session_id}/accept")
    def post_accept(session_id: str):
        try:
            session, lock = store.get(session_id)
        except KeyError:
            return error(404, f"unknown session {session_id!r}")
        with lock:
            session.step()
            session.accept()
            return _session_resource(session)

    @app.get("/sessions/{session_id}/result")
    def get_result(session_id: str):
        try:
            session, lock = store.get(session_id)
        except KeyError:
            return error(404, f"unknown session {session_id!r}")
        with lock:
            if session.status != "accepted" or session.result is None:
                return error(409, "session not accepted yet")
            csv_text = render_csv(session.result.output.table)
            return PlainTextResponse(
                csv_text,
                media_type="text/csv",
                headers={
                    "Content-Disposition": f'attachment; filename="{session_id}.csv"',
                    "X-Expression-Script": session.result.script_text.replace("\n", ";"),
                },
            )

    ui_dir = Path(__file__).resolve().parent.parent.parent / "frontend"
    if (ui_dir / "index.html").is_file() and (ui_dir / "dist").is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def main(port: int | None = None, data_dir: str | None = None) -> None:
    import uvicorn

    uvicorn.run(
        create_app(data_dir=data_dir),
        host="127.0.0.1",
        port=port or DEFAULT_PORT,
        log_level="warning",
    )


app = create_app()
