"""Event-sourced annotation state: judgments, stories, and review operations.

Every mutation appends one or two events to an ordered log (a shared seq
counter gives annotation events a total order); the current view is a pure
fold over that log, so replaying the log from empty reproduces the state
exactly. A timestamp is saved with every selection, which later feeds the
per-thread annotation-time analytics.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable

from .util import canonical_json


class Label(str, Enum):
    RUMOUR = "rumour"
    NON_RUMOUR = "nonrumour"
    UNSURE = "unsure"


class AnnotationError(ValueError):
    code = "annotation_error"


class UnknownThreadError(AnnotationError):
    code = "unknown_thread"


class UnknownStoryError(AnnotationError):
    code = "unknown_story"


class MissingStoryError(AnnotationError):
    code = "missing_story"


class StoryOnNonRumourError(AnnotationError):
    code = "story_on_nonrumour"


class NotARumourError(AnnotationError):
    code = "not_a_rumour"


class NameCollisionError(AnnotationError):
    code = "name_collision"


@dataclass(frozen=True, slots=True)
class Judgment:
    thread_id: str
    label: Label
    story_id: str | None
    annotator: str
    at: int  # epoch milliseconds UTC
    seq: int

    def as_dict(self) -> dict:
        return {
            "thread_id": self.thread_id,
            "label": self.label.value,
            "story_id": self.story_id,
            "annotator": self.annotator,
            "at": self.at,
            "seq": self.seq,
        }


@dataclass(frozen=True, slots=True)
class Story:
    story_id: str
    name: str
    created_at: int

    def as_dict(self) -> dict:
        return {"story_id": self.story_id, "name": self.name, "created_at": self.created_at}


def _now_ms() -> int:
    return time.time_ns() // 1_000_000


class AnnotationStore:
    """Single-writer event log with a concurrently readable current view.

    When `log_path` is set, each appended event is written through to the
    JSON-lines log immediately.
    """

    def __init__(self, thread_ids: Iterable[str], log_path: Path | str | None = None):
        self.thread_ids = set(thread_ids)
        self.history: list[dict] = []
        self.current: dict[str, Judgment] = {}
        self.stories: dict[str, Story] = {}
        self._names: dict[str, str] = {}  # casefolded name -> story_id
        self._seq = 0
        self._story_counter = 0
        self._lock = threading.Lock()
        self._log_file = None
        if log_path is not None:
            path = Path(log_path)
            path.parent.mkdir(parents=True, exist_ok=True)
            if path.exists():
                with path.open("r", encoding="utf-8") as fh:
                    for line in fh:
                        if line.strip():
                            self._apply(json.loads(line))
            self._log_file = path.open("a", encoding="utf-8")

    @classmethod
    def replay(cls, events: Iterable[dict], thread_ids: Iterable[str]) -> "AnnotationStore":
        store = cls(thread_ids)
        for event in events:
            store._apply(event)
        return store

    def close(self) -> None:
        if self._log_file is not None:
            self._log_file.close()
            self._log_file = None

    # -- event plumbing ------------------------------------------------------

    def _apply(self, event: dict) -> None:
        """Fold one event into the current view (also used for replay)."""
        kind = event["type"]
        self._seq = max(self._seq, event["seq"])
        if kind == "story_created":
            story = Story(story_id=event["story_id"], name=event["name"], created_at=event["at"])
            self.stories[story.story_id] = story
            self._names[story.name.casefold()] = story.story_id
            self._story_counter = max(self._story_counter, _story_number(story.story_id))
        elif kind == "story_renamed":
            old = self.stories[event["story_id"]]
            del self._names[old.name.casefold()]
            renamed = Story(story_id=old.story_id, name=event["name"], created_at=old.created_at)
            self.stories[renamed.story_id] = renamed
            self._names[renamed.name.casefold()] = renamed.story_id
        elif kind == "judgment":
            judgment = Judgment(
                thread_id=event["thread_id"],
                label=Label(event["label"]),
                story_id=event["story_id"],
                annotator=event["annotator"],
                at=event["at"],
                seq=event["seq"],
            )
            self.current[judgment.thread_id] = judgment
        else:
            raise ValueError(f"unknown event type: {kind!r}")
        self.history.append(event)

    def _append(self, event: dict) -> None:
        self._apply(event)
        if self._log_file is not None:
            self._log_file.write(canonical_json(event) + "\n")
            self._log_file.flush()

    def _next_seq(self) -> int:
        self._seq += 1
        return self._seq

    def _check_integrity(self) -> None:
        for judgment in self.current.values():
            has_story = judgment.story_id is not None
            if has_story != (judgment.label == Label.RUMOUR):
                raise AssertionError(f"story/label coupling broken for {judgment.thread_id}")
            if has_story and judgment.story_id not in self.stories:
                raise AssertionError(f"judgment references missing story {judgment.story_id}")

    # -- story helpers ---------------------------------------------------------

    def _resolve_story(self, story: str, at: int) -> str:
        """Story id or existing name resolves; an unseen name creates a story."""
        if story in self.stories:
            return story
        existing = self._names.get(story.casefold())
        if existing is not None:
            return existing
        if not story.strip():
            raise MissingStoryError("story name must be non-empty")
        self._story_counter += 1
        story_id = f"s{self._story_counter}"
        self._append(
            {"type": "story_created", "seq": self._next_seq(), "story_id": story_id, "name": story, "at": at}
        )
        return story_id

    # -- mutations ---------------------------------------------------------------

    def record_judgment(
        self,
        thread_id: str,
        label: Label | str,
        story: str | None = None,
        annotator: str = "",
        at: int | None = None,
    ) -> Judgment:
        label = Label(label)
        with self._lock:
            if thread_id not in self.thread_ids:
                raise UnknownThreadError(f"unknown thread: {thread_id}")
            if label == Label.RUMOUR and story is None:
                raise MissingStoryError("a rumour judgment needs a story")
            if label != Label.RUMOUR and story is not None:
                raise StoryOnNonRumourError(f"a {label.value} judgment cannot carry a story")
            at = _now_ms() if at is None else at
            story_id = self._resolve_story(story, at) if story is not None else None
            event = {
                "type": "judgment",
                "seq": self._next_seq(),
                "thread_id": thread_id,
                "label": label.value,
                "story_id": story_id,
                "annotator": annotator,
                "at": at,
            }
            self._append(event)
            self._check_integrity()
            return self.current[thread_id]

    def rename_story(self, story_id: str, new_name: str, at: int | None = None) -> Story:
        with self._lock:
            story = self.stories.get(story_id)
            if story is None:
                raise UnknownStoryError(f"unknown story: {story_id}")
            if not new_name.strip():
                raise NameCollisionError("story name must be non-empty")
            if new_name == story.name:
                return story
            owner = self._names.get(new_name.casefold())
            if owner is not None and owner != story_id:
                raise NameCollisionError(f"story name already in use: {new_name}")
            self._append(
                {
                    "type": "story_renamed",
                    "seq": self._next_seq(),
                    "story_id": story_id,
                    "name": new_name,
                    "at": _now_ms() if at is None else at,
                }
            )
            self._check_integrity()
            return self.stories[story_id]

    def move_thread(
        self,
        thread_id: str,
        target_story_id: str,
        annotator: str | None = None,
        at: int | None = None,
    ) -> Judgment:
        with self._lock:
            if thread_id not in self.thread_ids:
                raise UnknownThreadError(f"unknown thread: {thread_id}")
            previous = self.current.get(thread_id)
            if previous is None or previous.label != Label.RUMOUR:
                raise NotARumourError(f"thread {thread_id} is not currently a rumour")
            if target_story_id not in self.stories:
                raise UnknownStoryError(f"unknown story: {target_story_id}")
            event = {
                "type": "judgment",
                "seq": self._next_seq(),
                "thread_id": thread_id,
                "label": Label.RUMOUR.value,
                "story_id": target_story_id,
                "annotator": previous.annotator if annotator is None else annotator,
                "at": _now_ms() if at is None else at,
            }
            self._append(event)
            self._check_integrity()
            return self.current[thread_id]

    # -- queries -------------------------------------------------------------------

    def current_labels(self) -> dict[str, Label]:
        return {thread_id: judgment.label for thread_id, judgment in self.current.items()}

    def story_members(self, story_id: str) -> list[str]:
        return sorted(
            thread_id
            for thread_id, judgment in self.current.items()
            if judgment.label == Label.RUMOUR and judgment.story_id == story_id
        )

    def annotation_durations(self, session_gap: float = 600.0) -> list[tuple[str, Label, float]]:
        """Per-thread annotation time in seconds, derived from selection timestamps.

        Per annotator, consecutive judgment events within a session yield one
        duration each: at(k) - at(k-1). A gap above `session_gap` seconds (or a
        backwards clock) starts a new session; the first event of a session and
        re-annotations of an already-judged thread yield no duration.
        """
        by_annotator: dict[str, list[dict]] = {}
        first_seq: dict[str, int] = {}
        for event in self.history:
            if event["type"] != "judgment":
                continue
            by_annotator.setdefault(event["annotator"], []).append(event)
            first_seq.setdefault(event["thread_id"], event["seq"])
        durations: list[tuple[int, str, Label, float]] = []
        for events in by_annotator.values():
            previous_at = None
            for event in events:  # history order == seq order per annotator
                if previous_at is not None:
                    gap = (event["at"] - previous_at) / 1000.0
                    if 0 <= gap <= session_gap and first_seq[event["thread_id"]] == event["seq"]:
                        durations.append((event["seq"], event["thread_id"], Label(event["label"]), gap))
                previous_at = event["at"]
        durations.sort()
        return [(thread_id, label, seconds) for _, thread_id, label, seconds in durations]

    def snapshot(self) -> dict:
        """Current view + stories (the annotations.json export)."""
        return {
            "schema_version": 1,
            "judgments": {thread_id: j.as_dict() for thread_id, j in sorted(self.current.items())},
            "stories": {story_id: s.as_dict() for story_id, s in sorted(self.stories.items())},
        }

    def write_snapshot(self, path: Path | str) -> None:
        Path(path).write_text(canonical_json(self.snapshot(), pretty=True) + "\n", encoding="utf-8")


def _story_number(story_id: str) -> int:
    try:
        return int(story_id.lstrip("s"))
    except ValueError:
        return 0


def load_events(log_path: Path | str) -> list[dict]:
    events = []
    with Path(log_path).open("r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                events.append(json.loads(line))
    return events
