"""File-backed corpus store: immutable JSONL segments plus a JSON index.

Layout under the store root::

    meta.json                  magic + format version
    index.json                 id -> (segment, byte offset, retweet_count, day, parent)
    segments/seg-00001.jsonl   one immutable segment per committed batch

Only first occurrences of an id are ever written; later sightings may only
raise the indexed retweet_count (counts grow over a stream's lifetime).
The index is republished atomically, so concurrent readers always see a
consistent snapshot.
"""

from __future__ import annotations

import json
from pathlib import Path

from .records import TweetRecord, record_from_mapping, record_to_line
from .util import atomic_write_text, canonical_json

MAGIC = "rumourkit-corpus"
FORMAT_VERSION = 1


class StorageError(RuntimeError):
    """The store directory is unusable or an I/O operation failed."""


class CorpusStore:
    def __init__(self, root: Path | str):
        self.root = Path(root)
        self.segments: list[str] = []
        # id -> [segment index, byte offset, retweet_count, day, in_reply_to]
        self._index: dict[str, list] = {}
        self._days: dict[str, list[str]] = {}
        self._replies: dict[str, list[str]] = {}

    # -- lifecycle ---------------------------------------------------------

    @classmethod
    def create(cls, root: Path | str) -> "CorpusStore":
        store = cls(root)
        try:
            store.root.mkdir(parents=True, exist_ok=True)
            (store.root / "segments").mkdir(exist_ok=True)
            meta = {"magic": MAGIC, "format_version": FORMAT_VERSION}
            atomic_write_text(store.root / "meta.json", canonical_json(meta, pretty=True) + "\n")
            store._write_index()
        except OSError as exc:
            raise StorageError(f"cannot create corpus store at {store.root}: {exc}") from exc
        return store

    @classmethod
    def open(cls, root: Path | str) -> "CorpusStore":
        store = cls(root)
        meta_path = store.root / "meta.json"
        if not meta_path.is_file():
            raise StorageError(f"no corpus store at {store.root} (missing meta.json)")
        try:
            meta = json.loads(meta_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise StorageError(f"unreadable corpus store meta: {exc}") from exc
        if meta.get("magic") != MAGIC:
            raise StorageError(f"not a corpus store: bad magic {meta.get('magic')!r}")
        if meta.get("format_version") != FORMAT_VERSION:
            raise StorageError(f"unsupported corpus format version {meta.get('format_version')!r}")
        store._load_index()
        return store

    @classmethod
    def open_or_create(cls, root: Path | str) -> "CorpusStore":
        if (Path(root) / "meta.json").is_file():
            return cls.open(root)
        return cls.create(root)

    def _load_index(self) -> None:
        path = self.root / "index.json"
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise StorageError(f"unreadable corpus index: {exc}") from exc
        self.segments = data["segments"]
        self._index = data["ids"]
        self._days = {}
        self._replies = {}
        for rid, entry in self._index.items():
            self._days.setdefault(entry[3], []).append(rid)
            if entry[4] is not None:
                self._replies.setdefault(entry[4], []).append(rid)

    def _write_index(self) -> None:
        payload = {
            "magic": MAGIC,
            "version": FORMAT_VERSION,
            "segments": self.segments,
            "ids": self._index,
        }
        atomic_write_text(self.root / "index.json", canonical_json(payload) + "\n")

    # -- writes (single writer) ---------------------------------------------

    def commit_batch(self, records: list[TweetRecord], retweet_updates: dict[str, int] | None = None) -> str | None:
        """Append one immutable segment and republish the index atomically.

        `retweet_updates` carries per-id maxima observed on duplicate sightings.
        Returns the new segment name, or None when there was nothing to write.
        """
        retweet_updates = retweet_updates or {}
        for record in records:
            if record.id in self._index:
                raise ValueError(f"duplicate id in commit: {record.id}")
        seg_name = f"seg-{len(self.segments) + 1:05d}.jsonl"
        try:
            if records:
                offset = 0
                entries = {}
                lines = []
                for record in records:
                    line = record_to_line(record) + "\n"
                    entries[record.id] = [
                        len(self.segments),
                        offset,
                        record.retweet_count,
                        record.day,
                        record.in_reply_to,
                    ]
                    lines.append(line)
                    offset += len(line.encode("utf-8"))
                (self.root / "segments" / seg_name).write_text("".join(lines), encoding="utf-8")
                self.segments.append(seg_name)
                self._index.update(entries)
                for record in records:
                    self._days.setdefault(record.day, []).append(record.id)
                    if record.in_reply_to is not None:
                        self._replies.setdefault(record.in_reply_to, []).append(record.id)
            for rid, count in retweet_updates.items():
                entry = self._index.get(rid)
                if entry is not None and count > entry[2]:
                    entry[2] = count
            if records or retweet_updates:
                self._write_index()
        except OSError as exc:
            raise StorageError(f"corpus write failed: {exc}") from exc
        return seg_name if records else None

    # -- reads ---------------------------------------------------------------

    def __len__(self) -> int:
        return len(self._index)

    def __contains__(self, record_id: str) -> bool:
        return record_id in self._index

    def ids(self):
        return self._index.keys()

    def retweet_count(self, record_id: str) -> int:
        return self._index[record_id][2]

    def get(self, record_id: str) -> TweetRecord | None:
        entry = self._index.get(record_id)
        if entry is None:
            return None
        seg_idx, offset, retweets = entry[0], entry[1], entry[2]
        path = self.root / "segments" / self.segments[seg_idx]
        try:
            with path.open("rb") as fh:
                fh.seek(offset)
                line = fh.readline()
        except OSError as exc:
            raise StorageError(f"corpus read failed: {exc}") from exc
        record = record_from_mapping(json.loads(line))
        if record.retweet_count != retweets:
            record = TweetRecord(
                id=record.id,
                text=record.text,
                created_at=record.created_at,
                author=record.author,
                retweet_count=retweets,
                lang=record.lang,
                in_reply_to=record.in_reply_to,
                retweet_of=record.retweet_of,
            )
        return record

    def iter_records(self):
        """All kept records in segment order, with indexed retweet maxima applied."""
        for seg_name in self.segments:
            path = self.root / "segments" / seg_name
            try:
                with path.open("r", encoding="utf-8") as fh:
                    for line in fh:
                        if not line.strip():
                            continue
                        record = record_from_mapping(json.loads(line))
                        indexed = self._index[record.id][2]
                        if record.retweet_count != indexed:
                            record = TweetRecord(
                                id=record.id,
                                text=record.text,
                                created_at=record.created_at,
                                author=record.author,
                                retweet_count=indexed,
                                lang=record.lang,
                                in_reply_to=record.in_reply_to,
                                retweet_of=record.retweet_of,
                            )
                        yield record
            except OSError as exc:
                raise StorageError(f"corpus read failed: {exc}") from exc

    def days(self) -> list[str]:
        return sorted(self._days)

    def day_ids(self, day: str) -> list[str]:
        return list(self._days.get(day, []))

    def reply_ids(self, parent_id: str) -> list[str]:
        return list(self._replies.get(parent_id, []))

    def iter_reply_records(self):
        for record in self.iter_records():
            if record.in_reply_to is not None:
                yield record
