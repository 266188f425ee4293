"""Deterministic fixture datasets shaped to the published Ferguson study counts.

The real Ferguson collection is not redistributable, so tests and demos run
on synthetic datasets built here: a four-day annotated dataset whose per-day
rumour counts, thread-size stats and story overlap match the published
distribution table; an annotation-time event log whose trimmed means land on
the published 23.5 / 20.7 / 31.8 second figures; a 12,595-source reply load
matching the published 20.8 replies-per-source average; and random reply
forests for oracle-equivalence testing.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from .annostore import AnnotationStore, Label
from .corpus import CorpusStore
from .records import TweetRecord, parse_timestamp
from .threads import MappingReplyProvider, Thread, build_thread, write_thread
from .util import canonical_json

ANNOTATOR = "swissinfo"


def _day_ms(day: str) -> int:
    return parse_timestamp(f"{day}T00:00:00Z")


# -- the four-day annotated dataset -------------------------------------------
#
# Day layout (threads, rumours, story slots) matches the published table:
#   09 Aug  14 threads,   2 rumours,  2 stories
#   10 Aug 206 threads,  18 rumours, 13 stories
#   13 Aug 430 threads,  30 rumours, 17 stories
#   15 Aug 535 threads, 241 rumours, 17 stories (7 shared with 13 Aug)
# 49 story slots deduplicate to 42 distinct stories. Reply-count multisets
# reproduce each day's printed average and median thread size. Retweet
# counts make exactly 124 sources reach 250+ retweets, 34 of them rumours
# (27.42%), while all 1,185 stay at 100+ (24.6% rumours overall).

STORY_NAMES = (
    ["story %02d" % i for i in range(1, 33)]
    + [
        "involved in robbery",
        "officer name announcement",
        "new shooting reported",
        "national guard deployment",
        "military-grade weapons supplied",
        "police trained abroad",
        "airspace closed over protests",
        "journalist arrest claim",
        "tear gas on crowds claim",
        "curfew announcement claim",
    ]
)
assert len(STORY_NAMES) == 42


def _cycle(n: int, upper: int) -> list[int]:
    return [i % (upper + 1) for i in range(n)]


@dataclass
class DayPlan:
    day: str
    sizes: list[int]
    rumours: int
    story_refs: list[int]  # indices into STORY_NAMES, one slot per rumour thread


def _day_plans() -> list[DayPlan]:
    plans = [
        DayPlan(
            day="2014-08-09",
            sizes=[0] * 6 + [42, 42, 50, 55, 60, 60, 60, 65],
            rumours=2,
            story_refs=[0, 1],
        ),
        DayPlan(
            day="2014-08-10",
            sizes=_cycle(95, 15) + [16] * 25 + [26] * 28 + [27] * 58,
            rumours=18,
            story_refs=[i for i, n in zip(range(2, 15), [2, 2, 2, 2, 2] + [1] * 8) for _ in range(n)],
        ),
        DayPlan(
            day="2014-08-13",
            sizes=_cycle(200, 14) + [15] * 30 + [16] * 40 + [28] * 96 + [29] * 64,
            rumours=30,
            story_refs=[i for i, n in zip(range(15, 32), [2] * 13 + [1] * 4) for _ in range(n)],
        ),
        DayPlan(
            day="2014-08-15",
            sizes=_cycle(250, 15) + [16] * 40 + [34] * 93 + [35] * 152,
            rumours=241,
            story_refs=(
                [32] * 89
                + [33] * 26
                + [i for i, n in zip(range(15, 22), [10, 9, 9, 9, 8, 8, 8]) for _ in range(n)]
                + [i for i, n in zip(range(34, 42), [9, 9, 8, 8, 8, 8, 8, 7]) for _ in range(n)]
            ),
        ),
    ]
    for plan in plans:
        assert len(plan.story_refs) == plan.rumours
    return plans


@dataclass
class FergusonFixture:
    threads: list[Thread]
    sources: list[TweetRecord]
    replies: list[TweetRecord]
    store: AnnotationStore
    plans: list[DayPlan]
    labels: dict[str, Label]
    stories_by_thread: dict[str, str]  # thread id -> story name
    high_retweet_ids: set[str]  # sources with 250+ retweets


def build_ferguson_fixture(log_path: Path | str | None = None) -> FergusonFixture:
    rng = random.Random(20140809)
    plans = _day_plans()

    source_meta = []  # (day index, source id, created_at, size, label, story name | None)
    for day_index, plan in enumerate(plans):
        n = len(plan.sizes)
        sizes = list(plan.sizes)
        rng.shuffle(sizes)
        rumour_rows = set(rng.sample(range(n), plan.rumours))
        start = _day_ms(plan.day)
        step = (22 * 3600 * 1000) // (n + 1)
        story_iter = iter(plan.story_refs)
        for i in range(n):
            sid = f"f{plan.day[-2:]}-{i:04d}"
            created = start + (i + 1) * step
            if i in rumour_rows:
                label = Label.RUMOUR
                story = STORY_NAMES[next(story_iter)]
            else:
                label = Label.NON_RUMOUR
                story = None
            source_meta.append((day_index, sid, created, sizes[i], label, story))

    rumour_ids = [sid for _, sid, _, _, label, _ in source_meta if label == Label.RUMOUR]
    nonrumour_ids = [sid for _, sid, _, _, label, _ in source_meta if label == Label.NON_RUMOUR]
    high = set(rng.sample(rumour_ids, 34)) | set(rng.sample(nonrumour_ids, 90))
    retweets = {}
    low_i = high_i = 0
    for _, sid, _, _, _, _ in source_meta:
        if sid in high:
            retweets[sid] = 250 + (high_i * 37) % 700
            high_i += 1
        else:
            retweets[sid] = 100 + (low_i * 13) % 150
            low_i += 1

    sources: list[TweetRecord] = []
    replies: list[TweetRecord] = []
    replies_by_parent: dict[str, list[TweetRecord]] = {}
    labels: dict[str, Label] = {}
    stories_by_thread: dict[str, str] = {}
    for day_index, sid, created, size, label, story in source_meta:
        sources.append(
            TweetRecord(
                id=sid,
                text=f"#Ferguson report {sid}",
                created_at=created,
                author=f"user{day_index}{len(sources) % 97:02d}",
                retweet_count=retweets[sid],
                lang="en",
            )
        )
        labels[sid] = label
        if story is not None:
            stories_by_thread[sid] = story
        previous = sid
        for j in range(size):
            parent = previous if j % 4 == 3 else sid
            reply = TweetRecord(
                id=f"{sid}.r{j:03d}",
                text=f"reply {j} #ferguson",
                created_at=created + (j + 1) * 20_000,
                author=f"user{(j * 7) % 89:02d}",
                lang="en",
                in_reply_to=parent,
            )
            replies.append(reply)
            replies_by_parent.setdefault(parent, []).append(reply)
            previous = reply.id
    provider = MappingReplyProvider(replies_by_parent)
    threads = [build_thread(source, provider) for source in sources]

    store = AnnotationStore([s.id for s in sources], log_path=log_path)
    for day_index, plan in enumerate(plans):
        at = _day_ms(plan.day) + 9 * 3600 * 1000
        for meta in source_meta:
            if meta[0] != day_index:
                continue
            _, sid, _, _, label, story = meta
            store.record_judgment(sid, label, story=story, annotator=ANNOTATOR, at=at)
            at += 20_000

    return FergusonFixture(
        threads=threads,
        sources=sources,
        replies=replies,
        store=store,
        plans=plans,
        labels=labels,
        stories_by_thread=stories_by_thread,
        high_retweet_ids=high,
    )


def write_ferguson_dataset(fixture: FergusonFixture, root: Path | str) -> dict:
    """Materialise the fixture: corpus store, thread documents, annotation log."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    store = CorpusStore.create(root / "corpus")
    store.commit_batch(fixture.sources + fixture.replies)
    threads_dir = root / "threads"
    for thread in fixture.threads:
        write_thread(thread, threads_dir)
    log_path = root / "annotations.log"
    with log_path.open("w", encoding="utf-8") as fh:
        for event in fixture.store.history:
            fh.write(canonical_json(event) + "\n")
    return {"corpus": root / "corpus", "threads": threads_dir, "log": log_path}


# -- annotation timing ---------------------------------------------------------
#
# Group sizes are chosen so 5%-per-tail trimming drops exactly the planted
# tails: 897 non-rumour durations (44 per tail) and 303 rumour durations
# (15 per tail), with symmetric central mass about 20.7 s and 31.8 s. The
# pooled 1,200 durations trim 60 per end, leaving a mixture whose mean sits
# at 23.50 s.


def build_timing_durations() -> list[tuple[Label, int]]:
    """(label, duration-ms) pairs in annotation order."""
    rng = random.Random(318)
    items: list[tuple[Label, int]] = []

    def group(label: Label, tails: int, pairs: int, centre_ms: int, high_range: tuple[int, int]):
        for _ in range(tails):
            items.append((label, rng.randint(1_000, 5_000)))
        for _ in range(pairs):
            delta = rng.randint(1, 2_000)
            items.append((label, centre_ms - delta))
            items.append((label, centre_ms + delta))
        items.append((label, centre_ms))
        for _ in range(tails):
            items.append((label, rng.randint(*high_range)))

    group(Label.NON_RUMOUR, 44, 404, 20_700, (200_000, 400_000))
    group(Label.RUMOUR, 15, 136, 31_800, (300_000, 500_000))
    rng.shuffle(items)
    return items


def build_timing_store() -> tuple[AnnotationStore, list[tuple[Label, float]]]:
    """An event log whose consecutive selection deltas are the designed durations."""
    durations = build_timing_durations()
    n = len(durations)
    thread_ids = [f"t{k:04d}" for k in range(n + 1)]
    store = AnnotationStore(thread_ids)
    at = _day_ms("2014-08-20") + 8 * 3600 * 1000
    store.record_judgment(thread_ids[0], Label.NON_RUMOUR, annotator=ANNOTATOR, at=at)
    expected = []
    for k, (label, ms) in enumerate(durations, start=1):
        at += ms
        story = STORY_NAMES[k % 5] if label == Label.RUMOUR else None
        store.record_judgment(thread_ids[k], label, story=story, annotator=ANNOTATOR, at=at)
        expected.append((label, ms / 1000.0))
    return store, expected


# -- reply collection load -------------------------------------------------------


def build_reply_load_fixture() -> tuple[list[TweetRecord], MappingReplyProvider]:
    """12,595 sources carrying 262,495 replies in total (20.8 per source)."""
    base = _day_ms("2014-08-09")
    sources = []
    replies_by_parent = {}
    for i in range(12_595):
        sid = f"L{i:05d}"
        created = base + i * 10_000
        sources.append(TweetRecord(id=sid, text="#ferguson", created_at=created, retweet_count=100, lang="en"))
        count = 21 if i < 10_595 else 20
        replies_by_parent[sid] = [
            TweetRecord(
                id=f"{sid}r{j:02d}",
                text="#ferguson reply",
                created_at=created + (j + 1) * 100,
                lang="en",
                in_reply_to=sid,
            )
            for j in range(count)
        ]
    return sources, MappingReplyProvider(replies_by_parent)


# -- random reply forests ----------------------------------------------------------


@dataclass
class ReplyForest:
    sources: list[TweetRecord]
    records: dict[str, TweetRecord]
    provider: MappingReplyProvider


def random_reply_forest(rng: random.Random, n_nodes: int) -> ReplyForest:
    """A random forest: roots first, every later node replying to an earlier one."""
    n_sources = min(n_nodes, rng.randint(1, 5))
    records: list[TweetRecord] = []
    for i in range(n_nodes):
        parent = None if i < n_sources else records[rng.randrange(i)].id
        records.append(
            TweetRecord(
                id=f"n{i:04d}",
                text="x",
                created_at=1_000_000_000 + i * 1_000 + rng.randrange(500),
                lang="en",
                in_reply_to=parent,
            )
        )
    replies_by_parent: dict[str, list[TweetRecord]] = {}
    for record in records:
        if record.in_reply_to is not None:
            replies_by_parent.setdefault(record.in_reply_to, []).append(record)
    return ReplyForest(
        sources=records[:n_sources],
        records={r.id: r for r in records},
        provider=MappingReplyProvider(replies_by_parent),
    )


# -- mini corpus for the end-to-end pipeline ------------------------------------------


def mini_corpus_lines() -> list[str]:
    """A 16-line archive exercising every ingest drop reason plus reply edges."""

    def rec(**kw) -> str:
        return canonical_json(kw)

    return [
        rec(id="m1", author="ann", text="#Ferguson protest growing", created_at="2014-08-09T10:00:00Z", retweet_count=150, lang="en"),
        rec(id="m2", author="bob", text="Watching #FERGUSON tonight", created_at="2014-08-09T11:00:00Z", retweet_count=100, lang="en"),
        rec(id="m3", author="cat", text="more #ferguson news", created_at="2014-08-09T12:00:00Z", retweet_count=99, lang="en"),
        rec(id="m4", author="dee", text="#ferguson crowd downtown", created_at="2014-08-10T09:30:00Z", retweet_count=300, lang="en"),
        rec(id="m5", author="eve", text="manifestation #ferguson", created_at="2014-08-10T10:00:00Z", retweet_count=120, lang="fr"),
        rec(id="m6", author="fox", text="unrelated sports update", created_at="2014-08-10T11:00:00Z", retweet_count=250, lang="en"),
        rec(id="m1", author="ann", text="#Ferguson protest growing", created_at="2014-08-09T10:00:00Z", retweet_count=180, lang="en"),
        rec(id="r1", author="gus", text="@ann source? #ferguson", created_at="2014-08-09T10:05:00Z", lang="en", in_reply_to="m1"),
        rec(id="r2", author="hal", text="confirmed #ferguson", created_at="2014-08-09T10:10:00Z", lang="en", in_reply_to="r1"),
        rec(id="r3", author="ivy", text="same here #ferguson", created_at="2014-08-09T11:10:00Z", lang="en", in_reply_to="m2"),
        rec(id="r4", author="jan", text="photos #ferguson", created_at="2014-08-10T09:40:00Z", lang="en", in_reply_to="m4"),
        rec(id="r5", author="kim", text="replying #ferguson", created_at="2014-08-10T09:50:00Z", lang="en", in_reply_to="ghost"),
        rec(id="rt1", author="lee", text="RT #Ferguson protest growing", created_at="2014-08-09T10:20:00Z", retweet_count=151, lang="en", retweet_of="m1"),
        '{"id": "bad1", "text": "unterminated',
        rec(id="bad2", author="mia", text="#ferguson", created_at="2014-08-09T13:00:00Z", retweet_count=-1, lang="en"),
        rec(id="bad3", author="ned", text="#ferguson", created_at="2014-08-09T14:00:00Z", lang="en", in_reply_to="bad3"),
    ]


def mini_annotation_events(log_path: Path | str) -> AnnotationStore:
    """Judgments for the mini pipeline: two rumours with stories, one non-rumour."""
    store = AnnotationStore(["m1", "m2", "m4"], log_path=log_path)
    base = _day_ms("2014-08-16") + 9 * 3600 * 1000
    store.record_judgment("m1", Label.RUMOUR, story="robbery claim", annotator=ANNOTATOR, at=base)
    store.record_judgment("m2", Label.NON_RUMOUR, annotator=ANNOTATOR, at=base + 15_000)
    store.record_judgment("m4", Label.RUMOUR, story="new shooting claim", annotator=ANNOTATOR, at=base + 40_000)
    store.close()
    return store
