"""HTTP surface over AppService: JSON endpoints plus an SSE event stream."""

from __future__ import annotations

import json
import queue

from fastapi import Body, Depends, FastAPI, Header, Query, Request
from fastapi.responses import JSONResponse, StreamingResponse

from .service import AppService
from ..errors import IconError

_HTTP_STATUS = {
    "AUTH_FAILED": 401,
    "NOT_FOUND": 404,
    "UNKNOWN_PROJECT": 404,
    "UNKNOWN_DOCUMENT": 404,
    "UNKNOWN_CORPUS": 404,
    "NO_INITIAL_ONTOLOGY": 404,
    "INVALID_STATE": 409,
    "PROJECT_BUSY": 409,
    "VERIFICATION_BLOCKED": 409,
    "STALE_INDEX": 409,
    "DIGEST_MISMATCH": 412,
}

KEEPALIVE_S = 15.0


def _sse(entry: dict) -> str:
    return f"data: {json.dumps(entry, ensure_ascii=False)}\n\n"


def _etag(value: str | None) -> str | None:
    return value.strip().strip('"') if value else None


def create_app(service: AppService) -> FastAPI:
    app = FastAPI(title="icon workbench", docs_url=None, redoc_url=None)
    app.state.service = service

    @app.exception_handler(IconError)
    async def icon_error(_request: Request, exc: IconError) -> JSONResponse:
        body = {"error": exc.code, "message": exc.message}
        if exc.detail is not None:
            body["detail"] = exc.detail
        return JSONResponse(status_code=_HTTP_STATUS.get(exc.code, 400), content=body)

    def current_user(authorization: str | None = Header(default=None)) -> str:
        if not authorization or not authorization.startswith("Bearer "):
            raise IconError("AUTH_FAILED", "missing bearer token")
        return service.tokens.resolve(authorization[len("Bearer ") :])

    @app.get("/health")
    def health() -> dict:
        return {"ok": True}

    @app.post("/auth/login")
    def login(body: dict = Body(...)) -> dict:
        return service.tokens.authenticate(
            str(body.get("username", "")), str(body.get("password", ""))
        )

    @app.post("/projects", status_code=201)
    def create_project(body: dict = Body(...), user: str = Depends(current_user)) -> dict:
        return service.create_project(str(body.get("name", "")), actor=user)

    @app.get("/projects")
    def list_projects() -> list:
        return service.list_projects()

    @app.get("/projects/{project_id}/progress")
    def progress(project_id: str) -> dict:
        return service.get_progress(project_id)

    @app.post("/projects/{project_id}/stages/{stage}")
    def run_stage(
        project_id: str,
        stage: str,
        body: dict | None = Body(default=None),
        user: str = Depends(current_user),
    ) -> dict:
        params = (body or {}).get("params") or {}
        return service.run_stage(project_id, stage, actor=user, params=params)

    @app.get("/projects/{project_id}/ontology")
    def get_ontology(project_id: str, slot: str = Query(default="draft")) -> JSONResponse:
        doc = service.get_ontology(project_id, slot)
        return JSONResponse(content=doc, headers={"ETag": f'"{doc["digest"]}"'})

    @app.put("/projects/{project_id}/ontology")
    def put_ontology(
        project_id: str,
        body: dict = Body(...),
        slot: str = Query(default="draft"),
        if_match: str | None = Header(default=None),
        user: str = Depends(current_user),
    ) -> dict:
        return service.put_ontology(
            project_id, body, actor=user, slot=slot, if_match=_etag(if_match)
        )

    @app.post("/projects/{project_id}/verify")
    def verify(
        project_id: str, body: dict = Body(...), user: str = Depends(current_user)
    ) -> dict:
        return service.verify(
            project_id,
            str(body.get("verdict", "")),
            actor=user,
            comment=str(body.get("comment", "")),
        )

    @app.get("/dictionaries")
    def dictionaries() -> list:
        return service.list_dictionaries()

    @app.post("/documents", status_code=201)
    def ingest(body: dict = Body(...), user: str = Depends(current_user)) -> dict:
        return service.ingest(
            text=body.get("text", ""),
            source=str(body.get("source", "api")),
            actor=user,
            title=body.get("title"),
            language=body.get("language"),
        )

    @app.get("/search")
    def search(
        corpus: str = Query(default=""),
        q: str = Query(default=""),
        mode: str = Query(default="any"),
    ) -> dict:
        return service.search(corpus, q, mode)

    @app.get("/projects/{project_id}/events")
    def events(project_id: str, follow: bool = Query(default=False)) -> StreamingResponse:
        snapshot = service.event_log(project_id)

        def stream():
            listener = service.subscribe(project_id) if follow else None
            try:
                for entry in snapshot:
                    yield _sse(entry)
                if listener is None:
                    return
                recent = snapshot[-10:]
                while True:
                    try:
                        entry = listener.get(timeout=KEEPALIVE_S)
                    except queue.Empty:
                        yield ": keepalive\n\n"
                        continue
                    if entry in recent:
                        recent = [e for e in recent if e != entry]
                        continue
                    yield _sse(entry)
            finally:
                if listener is not None:
                    service.unsubscribe(project_id, listener)

        return StreamingResponse(stream(), media_type="text/event-stream")

    return app
