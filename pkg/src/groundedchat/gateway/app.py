"""HTTP + SSE boundary.

Endpoints:
  POST /sessions                     create (201) — body selects backend/config
  POST /sessions/{id}/utterance      run one turn (409 while one is in flight)
  POST /sessions/{id}/world          add / remove / move a table object
  POST /sessions/{id}/gesture        inject a detected gesture
  GET  /sessions/{id}/state          point-in-time snapshot
  GET  /sessions/{id}/transcript     full message history
  GET  /sessions/{id}/events         SSE stream ({seq, kind, payload, ts});
                                     supports Last-Event-ID resume and
                                     ?follow=false to drain and close
  GET  /healthz
"""

from __future__ import annotations

import json
from typing import Iterator

from fastapi import FastAPI, Header, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import StreamingResponse
from pydantic import BaseModel, Field

from ..errors import (
    BackendError,
    ConfigurationError,
    PreconditionError,
    WorldError,
)
from .config import AppConfig
from .runtime import SessionRuntime, TurnInProgress, create_runtime

SSE_POLL_S = 0.5


class UtteranceBody(BaseModel):
    text: str


class WorldBody(BaseModel):
    op: str
    name: str
    position: list[float] | None = Field(default=None, min_length=2, max_length=2)


class GestureBody(BaseModel):
    gesture: str


def create_app(config: AppConfig | None = None) -> FastAPI:
    config = config or AppConfig()
    app = FastAPI(title="groundedchat gateway")
    # The operator console is served as static files from any origin; there is
    # no authentication (see module docs), so a wide-open policy is fine here.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
        expose_headers=["*"],
    )
    sessions: dict[str, SessionRuntime] = {}
    app.state.sessions = sessions
    app.state.config = config

    def get_session(session_id: str) -> SessionRuntime:
        runtime = sessions.get(session_id)
        if runtime is None:
            raise HTTPException(status_code=404,
                                detail=f"unknown session {session_id!r}")
        return runtime

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "sessions": len(sessions)}

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        try:
            body = await request.json()
        except json.JSONDecodeError:
            body = {}
        if not isinstance(body, dict):
            raise HTTPException(status_code=400, detail="body must be an object")
        try:
            runtime = create_runtime(body, config)
        except (ConfigurationError, PreconditionError, KeyError, TypeError,
                ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except BackendError as exc:
            raise HTTPException(status_code=502, detail=str(exc))
        sessions[runtime.id] = runtime
        return {"session_id": runtime.id, "created_at": runtime.created_at,
                "backend": runtime.backend_kind}

    @app.post("/sessions/{session_id}/utterance")
    def post_utterance(session_id: str, body: UtteranceBody):
        runtime = get_session(session_id)
        if not body.text or not body.text.strip():
            raise HTTPException(status_code=400, detail="text must be nonempty")
        try:
            return runtime.utterance(body.text)
        except TurnInProgress as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except BackendError as exc:
            raise HTTPException(status_code=502, detail=str(exc))

    @app.post("/sessions/{session_id}/world")
    def post_world(session_id: str, body: WorldBody):
        runtime = get_session(session_id)
        position = tuple(body.position) if body.position is not None else None
        try:
            return runtime.mutate_world(body.op, body.name, position)
        except WorldError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except BackendError as exc:
            raise HTTPException(status_code=502, detail=str(exc))

    @app.post("/sessions/{session_id}/gesture")
    def post_gesture(session_id: str, body: GestureBody):
        runtime = get_session(session_id)
        try:
            return runtime.inject_gesture(body.gesture)
        except PreconditionError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.get("/sessions/{session_id}/state")
    def get_state(session_id: str):
        return get_session(session_id).state()

    @app.get("/sessions/{session_id}/transcript")
    def get_transcript(session_id: str):
        return {"messages": get_session(session_id).transcript()}

    @app.get("/sessions/{session_id}/events")
    async def get_events(session_id: str, request: Request, follow: bool = True,
                         last_event_id: int | None = None,
                         header_id: str | None = Header(default=None,
                                                        alias="Last-Event-ID")):
        runtime = get_session(session_id)
        after = last_event_id if last_event_id is not None else 0
        if header_id is not None:
            try:
                after = int(header_id)
            except ValueError:
                raise HTTPException(status_code=400, detail="bad Last-Event-ID")

        def frame(event: dict) -> str:
            return (f"id: {event['seq']}\nevent: {event['kind']}\n"
                    f"data: {json.dumps(event, ensure_ascii=False)}\n\n")

        if not follow:
            body = "".join(frame(e) for e in runtime.events.since(after))
            return StreamingResponse(iter([body]), media_type="text/event-stream")

        async def stream():
            cursor = after
            import anyio
            while True:
                if await request.is_disconnected():
                    return
                events = await anyio.to_thread.run_sync(
                    runtime.events.wait_since, cursor, SSE_POLL_S)
                if events:
                    cursor = events[-1]["seq"]
                    for event in events:
                        yield frame(event)
                else:
                    yield ": keep-alive\n\n"

        return StreamingResponse(stream(), media_type="text/event-stream")

    return app
