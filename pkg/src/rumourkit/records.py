"""Tweet records and the JSON-lines record format.

A record line is a UTF-8 JSON object with at least ``id``, ``text`` and
``created_at`` (epoch milliseconds or ISO-8601). Unknown fields are ignored.
Timestamps are normalised to UTC epoch milliseconds internally.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)
_MS = timedelta(milliseconds=1)


class MalformedRecordError(ValueError):
    """A line that cannot become a valid TweetRecord."""


@dataclass(frozen=True, slots=True)
class TweetRecord:
    """One social-media post. ``created_at`` is UTC epoch milliseconds."""

    id: str
    text: str
    created_at: int
    author: str = ""
    retweet_count: int = 0
    lang: str = "und"
    in_reply_to: str | None = None
    retweet_of: str | None = None

    @property
    def day(self) -> str:
        return day_of(self.created_at)

    @property
    def is_reply(self) -> bool:
        return self.in_reply_to is not None

    @property
    def is_retweet(self) -> bool:
        return self.retweet_of is not None


def parse_timestamp(value) -> int:
    """Epoch-ms integer or ISO-8601 string -> UTC epoch milliseconds."""
    if isinstance(value, bool):
        raise MalformedRecordError(f"bad timestamp: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if not value.is_integer():
            raise MalformedRecordError(f"fractional epoch-ms timestamp: {value!r}")
        return int(value)
    if isinstance(value, str):
        text = value.strip()
        if text.endswith(("Z", "z")):
            text = text[:-1] + "+00:00"
        try:
            dt = datetime.fromisoformat(text)
        except ValueError as exc:
            raise MalformedRecordError(f"bad ISO-8601 timestamp: {value!r}") from exc
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
        return (dt - _EPOCH) // _MS
    raise MalformedRecordError(f"bad timestamp: {value!r}")


def format_timestamp(ms: int) -> str:
    """Epoch milliseconds -> ISO-8601 UTC with millisecond precision."""
    dt = _EPOCH + timedelta(milliseconds=ms)
    return dt.strftime("%Y-%m-%dT%H:%M:%S.") + f"{dt.microsecond // 1000:03d}Z"


def day_of(ms: int) -> str:
    """UTC calendar day ("YYYY-MM-DD") containing the instant."""
    return (_EPOCH + timedelta(milliseconds=ms)).strftime("%Y-%m-%d")


def hour_of(ms: int) -> int:
    return (_EPOCH + timedelta(milliseconds=ms)).hour


def _id_field(raw: dict, name: str, required: bool = False) -> str | None:
    value = raw.get(name)
    if value is None:
        if required:
            raise MalformedRecordError(f"missing {name}")
        return None
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise MalformedRecordError(f"{name} must be a string")
    value = str(value)
    if not value:
        raise MalformedRecordError(f"empty {name}")
    return value


def record_from_mapping(raw: dict) -> TweetRecord:
    """Validate a decoded JSON object into a TweetRecord."""
    if not isinstance(raw, dict):
        raise MalformedRecordError("record is not a JSON object")
    rid = _id_field(raw, "id", required=True)
    text = raw.get("text")
    if text is None:
        raise MalformedRecordError("missing text")
    if not isinstance(text, str):
        raise MalformedRecordError("text must be a string")
    if raw.get("created_at") is None:
        raise MalformedRecordError("missing created_at")
    created = parse_timestamp(raw["created_at"])

    retweets = raw.get("retweet_count", 0)
    if isinstance(retweets, float) and retweets.is_integer():
        retweets = int(retweets)
    if isinstance(retweets, bool) or not isinstance(retweets, int):
        raise MalformedRecordError("retweet_count must be an integer")
    if retweets < 0:
        raise MalformedRecordError("retweet_count must be >= 0")

    author = raw.get("author") or ""
    if not isinstance(author, str):
        author = str(author)
    lang = raw.get("lang") or "und"
    if not isinstance(lang, str):
        raise MalformedRecordError("lang must be a string")

    in_reply_to = _id_field(raw, "in_reply_to")
    retweet_of = _id_field(raw, "retweet_of")
    if in_reply_to == rid:
        raise MalformedRecordError("self-reply is forbidden")
    if in_reply_to is not None and retweet_of is not None:
        raise MalformedRecordError("record cannot be both a reply and a retweet")

    return TweetRecord(
        id=rid,
        text=text,
        created_at=created,
        author=author,
        retweet_count=retweets,
        lang=lang.lower(),
        in_reply_to=in_reply_to,
        retweet_of=retweet_of,
    )


def parse_record(line: bytes | str) -> TweetRecord:
    """One JSON-lines record -> validated TweetRecord, or MalformedRecordError."""
    if isinstance(line, (bytes, bytearray)):
        try:
            line = line.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedRecordError("line is not valid UTF-8") from exc
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedRecordError(f"unparseable JSON: {exc}") from exc
    return record_from_mapping(raw)


def record_to_doc(record: TweetRecord) -> dict:
    """API/thread-document form: ISO timestamps, optional edges omitted when absent."""
    doc = {
        "id": record.id,
        "author": record.author,
        "text": record.text,
        "created_at": format_timestamp(record.created_at),
        "retweet_count": record.retweet_count,
        "lang": record.lang,
    }
    if record.in_reply_to is not None:
        doc["in_reply_to"] = record.in_reply_to
    if record.retweet_of is not None:
        doc["retweet_of"] = record.retweet_of
    return doc


def record_to_line(record: TweetRecord) -> str:
    """Storage form: compact JSON with epoch-ms created_at (exact round-trip)."""
    doc = {
        "id": record.id,
        "author": record.author,
        "text": record.text,
        "created_at": record.created_at,
        "retweet_count": record.retweet_count,
        "lang": record.lang,
    }
    if record.in_reply_to is not None:
        doc["in_reply_to"] = record.in_reply_to
    if record.retweet_of is not None:
        doc["retweet_of"] = record.retweet_of
    return json.dumps(doc, ensure_ascii=False, sort_keys=True, separators=(",", ":"))
