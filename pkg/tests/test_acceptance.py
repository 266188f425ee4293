"""End-to-end acceptance checks, one test per exit criterion.

Each test prints one ``[acceptance] ...: PASS`` line (visible with -s / -rA);
a failed assertion is the FAIL signal.
"""

import json
import random
import time

import pytest

from rumourkit.annostore import AnnotationStore, Label
from rumourkit.cli import main as cli_main
from rumourkit.fixtures import (
    build_reply_load_fixture,
    build_timing_store,
    random_reply_forest,
)
from rumourkit.report import timing_stats
from rumourkit.sampler import SamplePlan, sample_sources, threshold_sensitivity
from rumourkit.schemas import validate_bundle
from rumourkit.service import Dataset, create_app, import_bundle
from rumourkit.threads import build_all
from rumourkit.util import canonical_json

from .conftest import AUTH, LiveServer, make_record, make_store
from .test_threads import assert_matches_oracle


def ok(name):
    print(f"\n[acceptance] {name}: PASS", flush=True)


@pytest.fixture(scope="module")
def ferguson_server(ferguson_dataset_dir):
    root, paths = ferguson_dataset_dir
    dataset = Dataset.load(paths["threads"], root / "serve.log")
    # replay the fixture's log into the serving store
    for event in [json.loads(l) for l in paths["log"].read_text().splitlines()]:
        dataset.store._apply(event)
    with LiveServer(create_app(dataset)) as server:
        yield server, dataset


def test_table1_reproduction(ferguson_dataset_dir, capsys):
    root, paths = ferguson_dataset_dir
    started = time.monotonic()
    code = cli_main(
        ["report", "--threads-dir", str(paths["threads"]), "--log", str(paths["log"]),
         "--out", str(root / "report.json")]
    )
    elapsed = time.monotonic() - started
    out = capsys.readouterr().out
    assert code == 0
    payload = json.loads(out)

    def row_str(row):
        return f"{row['rumour_count']}/{row['total_threads']} ({row['rumour_pct']:.1f}%)"

    rows = {row["date"]: row for row in payload["day_table"]["rows"]}
    assert row_str(rows["2014-08-09"]) == "2/14 (14.3%)"
    assert row_str(rows["2014-08-10"]) == "18/206 (8.7%)"
    assert row_str(rows["2014-08-13"]) == "30/430 (7.0%)"
    assert row_str(rows["2014-08-15"]) == "241/535 (45.0%)"
    overall = payload["day_table"]["overall"]
    assert row_str(overall) == "291/1185 (24.6%)"
    assert overall["story_count"] == 42
    assert elapsed < 5.0, f"report took {elapsed:.2f}s"
    ok(f"day-table reproduction, string-exact, {elapsed:.2f}s < 5s")


def test_timing_means(capsys):
    store, _ = build_timing_store()
    durations = store.annotation_durations(600.0)
    stats = timing_stats(durations, 0.05)
    assert stats.overall_mean_s == pytest.approx(23.5, abs=0.05)
    assert stats.nonrumour_mean_s == pytest.approx(20.7, abs=0.05)
    assert stats.rumour_mean_s == pytest.approx(31.8, abs=0.05)
    with capsys.disabled():
        ok(
            f"trimmed timing means {stats.overall_mean_s:.3f}/{stats.nonrumour_mean_s:.3f}/"
            f"{stats.rumour_mean_s:.3f} within ±0.05 of 23.5/20.7/31.8"
        )


def test_thread_reconstruction_oracle_equivalence(capsys):
    rng = random.Random(1000)
    started = time.monotonic()
    forests = 0
    for trial in range(1000):
        if trial < 900:
            n = rng.randint(2, 150)
        elif trial < 995:
            n = rng.randint(151, 999)
        else:
            n = 1000
        forest = random_reply_forest(rng, n)
        threads, _ = build_all(forest.sources, forest.provider)
        assert_matches_oracle(forest, threads)
        forests += 1
    elapsed = time.monotonic() - started
    assert forests >= 1000
    assert elapsed < 60.0, f"oracle sweep took {elapsed:.1f}s"
    with capsys.disabled():
        ok(f"thread reconstruction equals brute-force closure on {forests} forests, {elapsed:.1f}s < 60s")


def test_sampling_properties(tmp_path, capsys):
    rng = random.Random(4242)
    for case in range(3):
        records = [
            make_record(
                f"c{case}r{i:04d}",
                at=rng.randrange(10**7),
                retweets=rng.randrange(0, 400),
                lang=rng.choice(["en", "fr"]),
                reply_to=f"c{case}r{rng.randrange(i):04d}" if i and rng.random() < 0.2 else None,
            )
            for i in range(500)
        ]
        store = make_store(tmp_path, records, name=f"s{case}")
        thresholds = sorted(rng.sample(range(1, 380), 4))
        previous = None
        for threshold in thresholds:
            sample = sample_sources(store, SamplePlan(min_retweets=threshold))
            picked = {r.id for r in sample}
            for record in records:
                if record.retweet_count == threshold and record.in_reply_to is None:
                    assert record.id in picked  # boundary inclusivity
            if previous is not None:
                assert picked <= previous  # subset monotonicity
                assert len(picked) <= len(previous)
            previous = picked

        labels = {
            r.id: rng.choice([Label.RUMOUR, Label.NON_RUMOUR, Label.UNSURE])
            for r in records
            if rng.random() < 0.7
        }
        for point in threshold_sensitivity(store, labels, thresholds):
            eligible = [
                r
                for r in records
                if r.retweet_count >= point.threshold and r.in_reply_to is None and r.retweet_of is None
            ]
            rumours = sum(1 for r in eligible if labels.get(r.id) == Label.RUMOUR)
            annotated = rumours + sum(1 for r in eligible if labels.get(r.id) == Label.NON_RUMOUR)
            assert point.annotated == annotated
            assert point.rumour_pct == (round(100.0 * rumours / annotated, 2) if annotated else None)
    with capsys.disabled():
        ok("sampling boundary inclusivity, subset monotonicity, sensitivity recount exact")


def test_sensitivity_reproduces_study_fractions(ferguson, tmp_path, capsys):
    store = make_store(tmp_path, ferguson.sources, name="fsrc")
    points = threshold_sensitivity(store, ferguson.store.current_labels(), [100, 250])
    at100, at250 = points
    assert (at100.annotated, at100.rumour_pct) == (1185, 24.56)
    assert round(at100.rumour_pct, 1) == 24.6
    assert (at250.annotated, at250.rumour_pct) == (124, 27.42)
    with capsys.disabled():
        ok("threshold sensitivity 24.6% at 100+, 27.42% at 250+")


def test_average_replies(capsys):
    sources, provider = build_reply_load_fixture()
    threads, stats = build_all(sources, provider)
    assert stats.sources_processed == 12_595
    assert stats.replies_collected == 262_495
    assert stats.avg_replies_per_source == pytest.approx(20.8, abs=0.05)
    assert sum(t.reply_count for t in threads) == 262_495
    with capsys.disabled():
        ok(f"avg replies per source {stats.avg_replies_per_source:.4f} within 20.8±0.05")


def test_event_sourcing_replay_byte_identical(ferguson, capsys):
    replayed = AnnotationStore.replay(ferguson.store.history, [s.id for s in ferguson.sources])
    original = canonical_json(ferguson.store.snapshot()).encode()
    assert canonical_json(replayed.snapshot()).encode() == original
    with capsys.disabled():
        ok("replaying the annotation log reproduces the current view byte-identically")


def test_export_import_review_round_trip(ferguson_server, tmp_path, capsys):
    server, _ = ferguson_server
    import httpx

    with httpx.Client(timeout=60) as client:
        bundle = client.get(f"{server.base_url}/api/export").json()
        validate_bundle(bundle)
        review_before = client.get(f"{server.base_url}/api/review").content
        import_bundle(bundle, tmp_path / "threads", tmp_path / "log")
        fresh = Dataset.load(tmp_path / "threads", tmp_path / "log")
        with LiveServer(create_app(fresh)) as second:
            review_after = client.get(f"{second.base_url}/api/review").content
    assert review_after == review_before
    with capsys.disabled():
        ok("export -> import -> review round-trips byte-identically")


def test_api_contract_suite(ferguson_server, live_small, capsys):
    import httpx

    fserver, _ = ferguson_server
    sserver, sdataset = live_small
    with httpx.Client(timeout=60) as client:
        # day index over the four annotated days
        days = client.get(f"{fserver.base_url}/api/days").json()
        assert [d["date"] for d in days] == ["2014-08-09", "2014-08-10", "2014-08-13", "2014-08-15"]
        assert [d["threads"] for d in days] == [14, 206, 430, 535]
        assert all(d["annotated"] == d["threads"] for d in days)

        # day timeline: 14 summaries, time-ascending, 404 on unknown dates
        timeline = client.get(f"{fserver.base_url}/api/days/2014-08-09/threads").json()
        assert len(timeline["threads"]) == 14
        stamps = [t["created_at"] for t in timeline["threads"]]
        assert stamps == sorted(stamps)
        assert client.get(f"{fserver.base_url}/api/days/2014-08-11/threads").status_code == 404

        # thread detail mirrors the stored document
        first = timeline["threads"][0]["id"]
        doc = client.get(f"{fserver.base_url}/api/threads/{first}").json()
        assert doc["format"] == "rumourkit-thread" and doc["source"]["id"] == first
        assert client.get(f"{fserver.base_url}/api/threads/does-not-exist").status_code == 404

        # review carries the study-scale totals
        review = client.get(f"{fserver.base_url}/api/review").json()
        assert review["counts"]["rumours"] == 291
        assert len(review["stories"]) == 42
        assert sum(review["counts"].values()) == 1185

        # judgment lifecycle with error codes, on the mutable instance
        base = sserver.base_url
        made = client.post(
            f"{base}/api/threads/fig1/judgment",
            json={"label": "rumour", "story": "involved in robbery"},
            headers=AUTH,
        )
        assert made.status_code == 200 and made.json()["story"]["name"] == "involved in robbery"
        assert client.post(f"{base}/api/threads/fig1/judgment", json={"label": "nonrumour"}, headers=AUTH).status_code == 200
        assert client.get(f"{base}/api/days/2014-08-09/threads").json()["threads"][0]["label"] == "nonrumour"
        assert client.post(f"{base}/api/threads/nope/judgment", json={"label": "unsure"}, headers=AUTH).status_code == 404
        assert client.post(f"{base}/api/threads/solo/judgment", json={"label": "rumour"}, headers=AUTH).status_code == 422
        assert client.post(f"{base}/api/threads/solo/judgment", json={"label": "unsure", "story": "x"}, headers=AUTH).status_code == 422

        # story management: rename + move + collision
        s1 = client.post(f"{base}/api/threads/d2a/judgment", json={"label": "rumour", "story": "temp name"}, headers=AUTH).json()["story"]
        s2 = client.post(f"{base}/api/threads/d2b/judgment", json={"label": "rumour", "story": "other"}, headers=AUTH).json()["story"]
        renamed = client.post(f"{base}/api/stories/{s1['story_id']}/rename", json={"name": "officer name announcement"}, headers=AUTH)
        assert renamed.status_code == 200
        assert client.post(f"{base}/api/stories/{s2['story_id']}/rename", json={"name": "officer name announcement"}, headers=AUTH).status_code == 409
        moved = client.post(f"{base}/api/threads/d2a/move", json={"story_id": s2["story_id"]}, headers=AUTH)
        assert moved.status_code == 200 and moved.json()["judgment"]["story_id"] == s2["story_id"]
        stories = {s["story_id"]: s for s in client.get(f"{base}/api/stories").json()}
        assert stories[s1["story_id"]]["members"] == 0
        assert stories[s2["story_id"]]["members"] == 2

        # review counts equal an independent fold over the event log
        latest = {}
        for event in sdataset.store.history:
            if event["type"] == "judgment":
                latest[event["thread_id"]] = event["label"]
        counts = client.get(f"{base}/api/review").json()["counts"]
        assert counts["rumours"] == sum(1 for v in latest.values() if v == "rumour")
        assert counts["unannotated"] == len(sdataset.threads) - len(latest)
    with capsys.disabled():
        ok("API contract examples pass against live server instances")
