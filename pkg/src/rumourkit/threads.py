"""Conversation reconstruction: breadth-first expansion over a reply provider.

A thread is a source tweet plus every reply transitively reachable from it.
Expansion queries the provider level by level ("deeper levels of replies"),
assigns depth = parent depth + 1, orders siblings by (created_at, id), and
skips any edge that would revisit a node (corrupt data can contain cycles).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Protocol
from urllib.parse import quote

from .corpus import CorpusStore
from .records import TweetRecord, record_from_mapping, record_to_doc
from .util import atomic_write_text, canonical_json

THREAD_MAGIC = "rumourkit-thread"
THREAD_FORMAT_VERSION = 1


class ProviderError(RuntimeError):
    """The reply provider failed; the partial thread is discarded."""


class ReplyProvider(Protocol):
    def direct_replies(self, tweet_id: str) -> list[TweetRecord]: ...


@dataclass(frozen=True, slots=True)
class ThreadNode:
    record: TweetRecord
    depth: int
    parent_id: str


@dataclass
class Thread:
    source: TweetRecord
    nodes: list[ThreadNode]
    max_depth: int

    @property
    def reply_count(self) -> int:
        return len(self.nodes)

    def node_ids(self) -> set[str]:
        return {node.record.id for node in self.nodes}


@dataclass
class ThreadBuildStats:
    sources_processed: int = 0
    replies_collected: int = 0
    orphans_dropped: int = 0
    cycles_broken: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def avg_replies_per_source(self) -> float | None:
        if self.sources_processed == 0:
            return None
        return self.replies_collected / self.sources_processed

    def as_dict(self) -> dict:
        return {
            "sources_processed": self.sources_processed,
            "replies_collected": self.replies_collected,
            "orphans_dropped": self.orphans_dropped,
            "cycles_broken": self.cycles_broken,
            "failures": list(self.failures),
            "avg_replies_per_source": self.avg_replies_per_source,
        }


def _sibling_order(records: Iterable[TweetRecord]) -> list[TweetRecord]:
    return sorted(records, key=lambda r: (r.created_at, r.id))


def _expand(source: TweetRecord, provider: ReplyProvider, max_depth: int | None) -> tuple[Thread, int]:
    if source.is_reply:
        raise ValueError(f"source {source.id} is itself a reply")
    nodes: list[ThreadNode] = []
    seen = {source.id}
    cycles = 0
    frontier = [source]
    depth = 0
    while frontier and (max_depth is None or depth < max_depth):
        depth += 1
        next_frontier: list[TweetRecord] = []
        for parent in frontier:
            for reply in _sibling_order(provider.direct_replies(parent.id)):
                if reply.in_reply_to != parent.id:
                    raise ProviderError(
                        f"provider returned {reply.id} (reply to {reply.in_reply_to!r}) for {parent.id}"
                    )
                if reply.id in seen:
                    cycles += 1
                    continue
                seen.add(reply.id)
                nodes.append(ThreadNode(record=reply, depth=depth, parent_id=parent.id))
                next_frontier.append(reply)
        frontier = next_frontier
    max_reached = max((node.depth for node in nodes), default=0)
    return Thread(source=source, nodes=nodes, max_depth=max_reached), cycles


def build_thread(source: TweetRecord, provider: ReplyProvider, max_depth: int | None = None) -> Thread:
    thread, _ = _expand(source, provider, max_depth)
    return thread


def build_all(
    sources: list[TweetRecord],
    provider: ReplyProvider,
    max_depth: int | None = None,
) -> tuple[list[Thread], ThreadBuildStats]:
    """One thread per source plus aggregate build statistics.

    Sources must be pre-deduplicated. A provider failure on one source is
    recorded and the rest still build. Orphan counting needs a provider that
    can enumerate its reply records (the corpus-backed one can); plain
    providers report zero orphans.
    """
    ids = [source.id for source in sources]
    if len(set(ids)) != len(ids):
        raise ValueError("sources must be deduplicated")
    stats = ThreadBuildStats()
    threads: list[Thread] = []
    for source in sources:
        try:
            thread, cycles = _expand(source, provider, max_depth)
        except ProviderError as exc:
            stats.failures.append(f"{source.id}: {exc}")
            continue
        threads.append(thread)
        stats.sources_processed += 1
        stats.replies_collected += thread.reply_count
        stats.cycles_broken += cycles
    iter_replies = getattr(provider, "iter_reply_records", None)
    contains = getattr(provider, "contains", None)
    if iter_replies is not None and contains is not None:
        source_ids = set(ids)
        for reply in iter_replies():
            parent = reply.in_reply_to
            if not contains(parent) and parent not in source_ids:
                stats.orphans_dropped += 1
    return threads, stats


class CorpusReplyProvider:
    """Reply edges served from a corpus store's in_reply_to index."""

    def __init__(self, store: CorpusStore):
        self.store = store

    def direct_replies(self, tweet_id: str) -> list[TweetRecord]:
        return _sibling_order(self.store.get(rid) for rid in self.store.reply_ids(tweet_id))

    def contains(self, tweet_id: str) -> bool:
        return tweet_id in self.store

    def iter_reply_records(self):
        return self.store.iter_reply_records()


def corpus_reply_provider(store: CorpusStore) -> CorpusReplyProvider:
    return CorpusReplyProvider(store)


class MappingReplyProvider:
    """In-memory provider over a {parent id: [reply records]} mapping."""

    def __init__(self, replies_by_parent: dict[str, list[TweetRecord]]):
        self.replies_by_parent = replies_by_parent

    def direct_replies(self, tweet_id: str) -> list[TweetRecord]:
        return list(self.replies_by_parent.get(tweet_id, []))


# -- serialisation -----------------------------------------------------------


def thread_to_doc(thread: Thread) -> dict:
    return {
        "format": THREAD_MAGIC,
        "version": THREAD_FORMAT_VERSION,
        "source": record_to_doc(thread.source),
        "nodes": [
            {"record": record_to_doc(node.record), "depth": node.depth, "parent": node.parent_id}
            for node in thread.nodes
        ],
        "reply_count": thread.reply_count,
        "max_depth": thread.max_depth,
    }


def thread_from_doc(doc: dict) -> Thread:
    if doc.get("format") != THREAD_MAGIC:
        raise ValueError(f"not a thread document: {doc.get('format')!r}")
    if doc.get("version") != THREAD_FORMAT_VERSION:
        raise ValueError(f"unsupported thread format version {doc.get('version')!r}")
    nodes = [
        ThreadNode(
            record=record_from_mapping(node["record"]),
            depth=node["depth"],
            parent_id=node["parent"],
        )
        for node in doc["nodes"]
    ]
    return Thread(source=record_from_mapping(doc["source"]), nodes=nodes, max_depth=doc["max_depth"])


def thread_filename(source_id: str) -> str:
    if re.fullmatch(r"[\w.-]+", source_id):
        return f"{source_id}.json"
    return f"{quote(source_id, safe='')}.json"


def write_thread(thread: Thread, out_dir: Path | str) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / thread_filename(thread.source.id)
    atomic_write_text(path, canonical_json(thread_to_doc(thread), pretty=True) + "\n")
    return path


def read_thread(path: Path | str) -> Thread:
    return thread_from_doc(json.loads(Path(path).read_text(encoding="utf-8")))


def read_threads_dir(threads_dir: Path | str) -> list[Thread]:
    """All thread documents under a directory, ordered by (created_at, id)."""
    loaded = [read_thread(p) for p in sorted(Path(threads_dir).glob("*.json"))]
    loaded.sort(key=lambda t: (t.source.created_at, t.source.id))
    return loaded
