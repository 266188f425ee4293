import threading
import time

import httpx
import pytest
import uvicorn

from rumourkit.annostore import AnnotationStore, Label
from rumourkit.corpus import CorpusStore
from rumourkit.fixtures import build_ferguson_fixture, write_ferguson_dataset
from rumourkit.records import TweetRecord, parse_timestamp
from rumourkit.service import Dataset, create_app
from rumourkit.threads import MappingReplyProvider, build_thread, write_thread

BASE_TS = parse_timestamp("2014-08-09T00:00:00Z")


def make_record(rid, *, text="#ferguson", at=0, author="a", retweets=0, lang="en", reply_to=None, retweet_of=None):
    return TweetRecord(
        id=rid,
        text=text,
        created_at=BASE_TS + at,
        author=author,
        retweet_count=retweets,
        lang=lang,
        in_reply_to=reply_to,
        retweet_of=retweet_of,
    )


def make_store(tmp_path, records, name="corpus"):
    store = CorpusStore.create(tmp_path / name)
    store.commit_batch(list(records))
    return store


@pytest.fixture(scope="session")
def ferguson():
    return build_ferguson_fixture()


@pytest.fixture(scope="session")
def ferguson_dataset_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("ferguson")
    fx = build_ferguson_fixture()
    paths = write_ferguson_dataset(fx, root)
    return root, paths


class LiveServer:
    """A real uvicorn instance on an ephemeral port, driven over TCP."""

    def __init__(self, app):
        self.server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=0, log_level="warning"))
        self.thread = threading.Thread(target=self.server.run, daemon=True)
        self.base_url = None

    def __enter__(self):
        self.thread.start()
        deadline = time.monotonic() + 10
        while not self.server.started:
            if time.monotonic() > deadline:
                raise RuntimeError("server did not start")
            time.sleep(0.01)
        port = self.server.servers[0].sockets[0].getsockname()[1]
        self.base_url = f"http://127.0.0.1:{port}"
        return self

    def __exit__(self, *exc):
        self.server.should_exit = True
        self.thread.join(timeout=10)


def fig1_thread():
    """A source, three direct replies, and one nested reply (two depth levels)."""
    source = make_record("fig1", text="#ferguson rumour source", at=3600_000, retweets=120)
    replies = [
        make_record("fig1.a", at=3_660_000, reply_to="fig1"),
        make_record("fig1.b", at=3_720_000, reply_to="fig1"),
        make_record("fig1.c", at=3_780_000, reply_to="fig1"),
        make_record("fig1.b1", at=3_840_000, reply_to="fig1.b"),
    ]
    by_parent = {}
    for r in replies:
        by_parent.setdefault(r.in_reply_to, []).append(r)
    return build_thread(source, MappingReplyProvider(by_parent))


def small_threads():
    """Four threads across two days: fig1 + a childless source on day one,
    two sources on day two."""
    t1 = fig1_thread()
    t2 = build_thread(make_record("solo", at=7_200_000, retweets=101), MappingReplyProvider({}))
    day2 = 86_400_000
    r = make_record("d2a.r", at=day2 + 120_000, reply_to="d2a")
    t3 = build_thread(
        make_record("d2a", at=day2 + 60_000, retweets=300),
        MappingReplyProvider({"d2a": [r]}),
    )
    t4 = build_thread(make_record("d2b", at=day2 + 180_000, retweets=150), MappingReplyProvider({}))
    return [t1, t2, t3, t4]


@pytest.fixture
def small_dataset(tmp_path):
    threads = small_threads()
    threads_dir = tmp_path / "threads"
    for thread in threads:
        write_thread(thread, threads_dir)
    store = AnnotationStore([t.source.id for t in threads], log_path=tmp_path / "annotations.log")
    return Dataset(threads, store)


@pytest.fixture
def live_small(small_dataset):
    with LiveServer(create_app(small_dataset)) as server:
        yield server, small_dataset


@pytest.fixture
def client():
    with httpx.Client(timeout=10) as c:
        yield c


AUTH = {"X-Annotator-Token": "tok-jo"}

__all__ = [
    "AUTH",
    "AnnotationStore",
    "Label",
    "LiveServer",
    "fig1_thread",
    "make_record",
    "make_store",
    "small_threads",
]
