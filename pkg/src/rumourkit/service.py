"""HTTP API for the annotation workflow.

Serves day timelines, thread detail, judgment submission, story management,
the review summary and dataset export over HTTP/1.1 + JSON. Mutations
funnel into the annotation store's single-writer log; reads are snapshots.
Every response carries an X-Schema-Version header. Mutating endpoints
accept an Idempotency-Key header: a retried key replays the first response
without re-applying the mutation. Annotator identity comes from a required
X-Annotator-Token header (optionally mapped to ids via a token file).
"""

from __future__ import annotations

import json
import threading
from contextlib import asynccontextmanager
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel
from starlette.exceptions import HTTPException as StarletteHTTPException

from .annostore import (
    AnnotationError,
    AnnotationStore,
    Label,
    MissingStoryError,
    NameCollisionError,
    NotARumourError,
    StoryOnNonRumourError,
    UnknownStoryError,
    UnknownThreadError,
)
from .threads import Thread, read_threads_dir, thread_to_doc
from .util import canonical_json

SCHEMA_VERSION = "1"
BUNDLE_MAGIC = "rumourkit-bundle"

_STATUS_BY_ERROR = {
    UnknownThreadError: 404,
    UnknownStoryError: 404,
    MissingStoryError: 422,
    StoryOnNonRumourError: 422,
    NotARumourError: 422,
    NameCollisionError: 409,
}


class JudgmentBody(BaseModel):
    label: str
    story: str | None = None


class RenameBody(BaseModel):
    name: str


class MoveBody(BaseModel):
    story_id: str


class Dataset:
    """Threads plus annotation state served by one instance."""

    def __init__(self, threads: list[Thread], store: AnnotationStore, tokens: dict[str, str] | None = None):
        self.threads = sorted(threads, key=lambda t: (t.source.created_at, t.source.id))
        self.by_id = {t.source.id: t for t in self.threads}
        self.docs = {t.source.id: thread_to_doc(t) for t in self.threads}
        self.store = store
        self.tokens = tokens
        self.idempotency: dict[str, tuple[int, dict]] = {}
        self.idempotency_lock = threading.Lock()

    @classmethod
    def load(
        cls,
        threads_dir: Path | str,
        log_path: Path | str,
        tokens_path: Path | str | None = None,
    ) -> "Dataset":
        threads = read_threads_dir(threads_dir)
        store = AnnotationStore([t.source.id for t in threads], log_path=log_path)
        tokens = None
        if tokens_path is not None:
            tokens = json.loads(Path(tokens_path).read_text(encoding="utf-8"))
        return cls(threads, store, tokens)

    def annotator_for(self, token: str) -> str | None:
        if self.tokens is None:
            return token
        return self.tokens.get(token)

    # -- views ---------------------------------------------------------------

    def thread_summary(self, thread: Thread) -> dict:
        judgment = self.store.current.get(thread.source.id)
        story_name = None
        if judgment is not None and judgment.story_id is not None:
            story_name = self.store.stories[judgment.story_id].name
        return {
            "id": thread.source.id,
            "text": thread.source.text,
            "author": thread.source.author,
            "created_at": self.docs[thread.source.id]["source"]["created_at"],
            "retweet_count": thread.source.retweet_count,
            "reply_count": thread.reply_count,
            "label": judgment.label.value if judgment is not None else "unannotated",
            "story": story_name,
        }

    def days(self) -> list[dict]:
        grouped: dict[str, list[Thread]] = {}
        for thread in self.threads:
            grouped.setdefault(thread.source.day, []).append(thread)
        out = []
        for day in sorted(grouped):
            members = grouped[day]
            annotated = sum(1 for t in members if t.source.id in self.store.current)
            out.append({"date": day, "threads": len(members), "annotated": annotated})
        return out

    def timeline(self, date: str) -> list[dict] | None:
        members = [t for t in self.threads if t.source.day == date]
        if not members:
            return None
        return [self.thread_summary(t) for t in members]

    def review(self) -> dict:
        counts = {"rumours": 0, "non_rumours": 0, "unsure": 0, "unannotated": 0}
        members_by_story: dict[str, list[dict]] = {}
        for thread in self.threads:
            judgment = self.store.current.get(thread.source.id)
            if judgment is None:
                counts["unannotated"] += 1
                continue
            if judgment.label == Label.RUMOUR:
                counts["rumours"] += 1
                members_by_story.setdefault(judgment.story_id, []).append(self.thread_summary(thread))
            elif judgment.label == Label.NON_RUMOUR:
                counts["non_rumours"] += 1
            else:
                counts["unsure"] += 1
        stories = []
        for story_id in self.store.stories:  # dict order == creation order
            story = self.store.stories[story_id]
            members = members_by_story.get(story_id, [])
            stories.append({"story": story.as_dict(), "threads": members, "empty": not members})
        return {"schema_version": 1, "stories": stories, "counts": counts}

    def export_bundle(self) -> dict:
        return {
            "magic": BUNDLE_MAGIC,
            "schema_version": 1,
            "threads": [self.docs[t.source.id] for t in self.threads],
            "stories": [story.as_dict() for story in self.store.stories.values()],
            "events": list(self.store.history),
        }


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": {"code": code, "message": message}})


def create_app(dataset: Dataset) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        dataset.store.close()  # flush the annotation log on shutdown

    app = FastAPI(title="rumourkit annotation service", openapi_url="/openapi.json", lifespan=lifespan)

    @app.middleware("http")
    async def add_schema_version(request: Request, call_next):
        response = await call_next(request)
        response.headers["X-Schema-Version"] = SCHEMA_VERSION
        return response

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        return _error(400, "malformed_body", str(exc.errors()[:1]))

    @app.exception_handler(json.JSONDecodeError)
    async def on_json_error(request: Request, exc: json.JSONDecodeError):
        return _error(400, "malformed_body", "request body is not valid JSON")

    @app.exception_handler(StarletteHTTPException)
    async def on_http_error(request: Request, exc: StarletteHTTPException):
        code = "not_found" if exc.status_code == 404 else "http_error"
        return _error(exc.status_code, code, str(exc.detail))

    @app.exception_handler(AnnotationError)
    async def on_annotation_error(request: Request, exc: AnnotationError):
        status = _STATUS_BY_ERROR.get(type(exc), 422)
        return _error(status, exc.code, str(exc))

    def require_annotator(request: Request) -> str | JSONResponse:
        token = request.headers.get("X-Annotator-Token")
        if not token:
            return _error(401, "missing_token", "X-Annotator-Token header is required")
        annotator = dataset.annotator_for(token)
        if annotator is None:
            return _error(401, "unknown_token", "token does not map to an annotator")
        return annotator

    def idempotent(request: Request, apply):
        """Replay a cached response when the Idempotency-Key was already used."""
        key = request.headers.get("Idempotency-Key")
        if key:
            with dataset.idempotency_lock:
                cached = dataset.idempotency.get(key)
            if cached is not None:
                status, payload = cached
                return JSONResponse(status_code=status, content=payload)
        status, payload = apply()
        if key and status < 400:
            with dataset.idempotency_lock:
                dataset.idempotency[key] = (status, payload)
        return JSONResponse(status_code=status, content=payload)

    def judgment_payload(judgment) -> dict:
        story = None
        if judgment.story_id is not None:
            story = dataset.store.stories[judgment.story_id].as_dict()
        return {"judgment": judgment.as_dict(), "story": story}

    # -- reads -----------------------------------------------------------------

    @app.get("/api/days")
    def get_days():
        return dataset.days()

    @app.get("/api/days/{date}/threads")
    def get_timeline(date: str):
        timeline = dataset.timeline(date)
        if timeline is None:
            return _error(404, "unknown_date", f"no threads on {date}")
        return {"date": date, "threads": timeline}

    @app.get("/api/threads/{thread_id}")
    def get_thread(thread_id: str):
        doc = dataset.docs.get(thread_id)
        if doc is None:
            return _error(404, "unknown_thread", f"unknown thread: {thread_id}")
        return doc

    @app.get("/api/stories")
    def get_stories():
        return [
            {**dataset.store.stories[sid].as_dict(), "members": len(dataset.store.story_members(sid))}
            for sid in dataset.store.stories
        ]

    @app.get("/api/review")
    def get_review():
        return dataset.review()

    @app.get("/api/export")
    def get_export():
        return dataset.export_bundle()

    # -- mutations ----------------------------------------------------------------

    @app.post("/api/threads/{thread_id}/judgment")
    def post_judgment(thread_id: str, body: JudgmentBody, request: Request):
        annotator = require_annotator(request)
        if isinstance(annotator, JSONResponse):
            return annotator
        try:
            label = Label(body.label)
        except ValueError:
            return _error(400, "invalid_label", f"label must be one of {[l.value for l in Label]}")

        def apply():
            judgment = dataset.store.record_judgment(thread_id, label, story=body.story, annotator=annotator)
            return 200, judgment_payload(judgment)

        return idempotent(request, apply)

    @app.post("/api/stories/{story_id}/rename")
    def post_rename(story_id: str, body: RenameBody, request: Request):
        annotator = require_annotator(request)
        if isinstance(annotator, JSONResponse):
            return annotator

        def apply():
            story = dataset.store.rename_story(story_id, body.name)
            return 200, {"story": story.as_dict()}

        return idempotent(request, apply)

    @app.post("/api/threads/{thread_id}/move")
    def post_move(thread_id: str, body: MoveBody, request: Request):
        annotator = require_annotator(request)
        if isinstance(annotator, JSONResponse):
            return annotator

        def apply():
            judgment = dataset.store.move_thread(thread_id, body.story_id, annotator=annotator)
            return 200, judgment_payload(judgment)

        return idempotent(request, apply)

    return app


def import_bundle(bundle: dict, threads_dir: Path | str, log_path: Path | str) -> dict:
    """Materialise an export bundle as a servable dataset directory."""
    from .schemas import validate_bundle
    from .threads import thread_from_doc, write_thread

    validate_bundle(bundle)
    threads_dir = Path(threads_dir)
    threads = [thread_from_doc(doc) for doc in bundle["threads"]]
    for thread in threads:
        write_thread(thread, threads_dir)
    log_path = Path(log_path)
    log_path.parent.mkdir(parents=True, exist_ok=True)
    with log_path.open("w", encoding="utf-8") as fh:
        for event in bundle["events"]:
            fh.write(canonical_json(event) + "\n")
    return {"threads": len(threads), "events": len(bundle["events"]), "stories": len(bundle["stories"])}
