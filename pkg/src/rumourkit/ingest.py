"""Parse, filter, dedup and persist raw tweet archives into a corpus store.

Filters are applied per line in a fixed order (malformed, keyword, language,
date window) with dedup last, serialised at the store boundary. First
occurrence of an id wins; later sightings only raise the stored
retweet_count, since counts grow over a stream's lifetime.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .corpus import CorpusStore, StorageError
from .records import MalformedRecordError, TweetRecord, parse_record


@dataclass
class IngestFilter:
    keywords: list[str] = field(default_factory=list)
    languages: frozenset[str] | None = None
    date_range: tuple[int, int] | None = None  # [start, end) epoch-ms UTC

    def validate(self) -> None:
        if any(not k for k in self.keywords):
            raise ValueError("keywords must be non-empty strings")
        if self.date_range is not None:
            start, end = self.date_range
            if not start < end:
                raise ValueError("date_range start must be < end")
        if self.languages is not None and not self.languages:
            raise ValueError("languages set must be non-empty when given")


@dataclass
class CorpusStats:
    total_read: int = 0
    kept: int = 0
    dropped_duplicate: int = 0
    dropped_language: int = 0
    dropped_keyword: int = 0
    dropped_date: int = 0
    dropped_malformed: int = 0

    def as_dict(self) -> dict:
        return {
            "total_read": self.total_read,
            "kept": self.kept,
            "dropped_duplicate": self.dropped_duplicate,
            "dropped_language": self.dropped_language,
            "dropped_keyword": self.dropped_keyword,
            "dropped_date": self.dropped_date,
            "dropped_malformed": self.dropped_malformed,
        }

    @property
    def dropped_total(self) -> int:
        return (
            self.dropped_duplicate
            + self.dropped_language
            + self.dropped_keyword
            + self.dropped_date
            + self.dropped_malformed
        )


def keyword_match(text: str, keywords: Iterable[str]) -> bool:
    """True iff any keyword occurs in `text` under Unicode case-folding.

    Matching is plain substring: a '#' in the keyword must appear in the text.
    """
    folded = text.casefold()
    return any(keyword.casefold() in folded for keyword in keywords)


def ingest_corpus(lines: Iterable[bytes | str], filt: IngestFilter, store: CorpusStore) -> CorpusStats:
    """Run the stream through `filt` into `store`; returns exact counters.

    Malformed lines are counted, never fatal. A storage failure aborts with a
    StorageError carrying the partial-progress stats in `.stats`.
    """
    filt.validate()
    stats = CorpusStats()
    kept: list[TweetRecord] = []
    batch_ids: dict[str, int] = {}  # id -> position in `kept`
    retweet_updates: dict[str, int] = {}

    for line in lines:
        stats.total_read += 1
        try:
            record = parse_record(line)
        except MalformedRecordError:
            stats.dropped_malformed += 1
            continue
        if filt.keywords and not keyword_match(record.text, filt.keywords):
            stats.dropped_keyword += 1
            continue
        if filt.languages is not None and record.lang not in filt.languages:
            stats.dropped_language += 1
            continue
        if filt.date_range is not None:
            start, end = filt.date_range
            if not start <= record.created_at < end:
                stats.dropped_date += 1
                continue
        if record.id in store:
            stats.dropped_duplicate += 1
            best = retweet_updates.get(record.id, store.retweet_count(record.id))
            if record.retweet_count > best:
                retweet_updates[record.id] = record.retweet_count
            continue
        if record.id in batch_ids:
            stats.dropped_duplicate += 1
            first = kept[batch_ids[record.id]]
            if record.retweet_count > first.retweet_count:
                kept[batch_ids[record.id]] = TweetRecord(
                    id=first.id,
                    text=first.text,
                    created_at=first.created_at,
                    author=first.author,
                    retweet_count=record.retweet_count,
                    lang=first.lang,
                    in_reply_to=first.in_reply_to,
                    retweet_of=first.retweet_of,
                )
            continue
        batch_ids[record.id] = len(kept)
        kept.append(record)
        stats.kept += 1

    try:
        store.commit_batch(kept, retweet_updates)
    except StorageError as exc:
        exc.stats = stats
        raise
    return stats


def iter_jsonl_lines(paths: Iterable[Path | str]):
    for path in paths:
        with open(path, "rb") as fh:
            for line in fh:
                if line.strip():
                    yield line


def ingest_paths(paths: Iterable[Path | str], filt: IngestFilter, store: CorpusStore) -> CorpusStats:
    return ingest_corpus(iter_jsonl_lines(paths), filt, store)
