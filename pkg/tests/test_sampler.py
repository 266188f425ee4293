import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rumourkit.annostore import Label
from rumourkit.sampler import (
    EmptyCorpusError,
    SamplePlan,
    compute_distribution,
    log_grid,
    sample_sources,
    threshold_sensitivity,
)

from .conftest import make_record, make_store


def counts_store(tmp_path, counts, name="c"):
    records = [make_record(f"r{i:05d}", at=i * 1000, retweets=c) for i, c in enumerate(counts)]
    return make_store(tmp_path, records)


# -- distribution -----------------------------------------------------------


def test_log_grid_shape():
    assert log_grid(100) == [0, 1, 2, 5, 10, 20, 50, 100, 200]
    assert log_grid(0) == [0, 1]


def test_ccdf_direct_counts(tmp_path):
    store = counts_store(tmp_path, [0, 0, 5, 100, 250])
    dist = compute_distribution(store, extra_thresholds=[250])
    ccdf = dict(dist.ccdf)
    assert ccdf[0] == 5
    assert ccdf[100] == 2
    assert ccdf[250] == 1
    assert dist.total == 5


def test_ccdf_boundary_inclusive_single_tweet(tmp_path):
    store = counts_store(tmp_path, [100])
    dist = compute_distribution(store, extra_thresholds=[101])
    ccdf = dict(dist.ccdf)
    assert ccdf[0] == 1 and ccdf[100] == 1 and ccdf[101] == 0
    values = [n for _, n in dist.ccdf]
    assert values == sorted(values, reverse=True)  # non-increasing


def test_ccdf_matches_brute_force_on_power_law(tmp_path):
    rng = random.Random(7)
    counts = [int(rng.paretovariate(1.2)) - 1 for _ in range(10_000)]
    store = counts_store(tmp_path, counts)
    dist = compute_distribution(store, extra_thresholds=[3, 17, 99])
    for threshold, n in dist.ccdf:
        assert n == sum(1 for c in counts if c >= threshold)
    assert dict(dist.ccdf)[0] == len(counts)


def test_histogram_conserves_total(tmp_path):
    counts = [0, 1, 1, 3, 9, 10, 57, 100, 100, 2000]
    store = counts_store(tmp_path, counts)
    dist = compute_distribution(store)
    assert sum(n for _, n in dist.histogram) == len(counts)
    lowers = [low for low, _ in dist.histogram]
    assert lowers == sorted(lowers)


def test_empty_corpus_errors(tmp_path):
    store = make_store(tmp_path, [])
    with pytest.raises(EmptyCorpusError):
        compute_distribution(store)


# -- sampling ------------------------------------------------------------------


def test_boundary_inclusive_at_threshold(tmp_path):
    store = make_store(
        tmp_path,
        [
            make_record("a", at=0, retweets=99),
            make_record("b", at=1000, retweets=100),
            make_record("c", at=2000, retweets=101),
        ],
    )
    picked = sample_sources(store, SamplePlan(min_retweets=100))
    assert [r.id for r in picked] == ["b", "c"]


def test_filter_conjunction_excludes_replies(tmp_path):
    store = make_store(
        tmp_path,
        [
            make_record("s1", at=0, retweets=4),
            make_record("s2", at=1000, retweets=2),
            make_record("s3", at=2000, retweets=1),
            make_record("p1", at=3000, retweets=8, reply_to="s1"),
            make_record("p2", at=4000, retweets=9, reply_to="s2"),
        ],
    )
    picked = sample_sources(store, SamplePlan(min_retweets=1, exclude_replies=True))
    assert [r.id for r in picked] == ["s1", "s2", "s3"]


def test_excludes_pure_retweets(tmp_path):
    store = make_store(
        tmp_path,
        [make_record("s", at=0, retweets=500), make_record("rt", at=1000, retweets=500, retweet_of="s")],
    )
    assert [r.id for r in sample_sources(store, SamplePlan(min_retweets=100))] == ["s"]


def test_language_filter_in_plan(tmp_path):
    store = make_store(
        tmp_path,
        [make_record("en1", at=0, retweets=5, lang="en"), make_record("fr1", at=1000, retweets=5, lang="fr")],
    )
    picked = sample_sources(store, SamplePlan(min_retweets=1, languages=frozenset({"en"})))
    assert [r.id for r in picked] == ["en1"]


def test_ordering_by_time_then_id(tmp_path):
    store = make_store(
        tmp_path,
        [
            make_record("z", at=0, retweets=5),
            make_record("a", at=0, retweets=5),
            make_record("m", at=1000, retweets=5),
        ],
    )
    picked = sample_sources(store, SamplePlan(min_retweets=1))
    assert [r.id for r in picked] == ["a", "z", "m"]


def test_sample_matches_linear_scan_oracle(tmp_path):
    rng = random.Random(21)
    records = []
    for i in range(400):
        kind = rng.randrange(3)
        records.append(
            make_record(
                f"r{i:04d}",
                at=rng.randrange(10**7),
                retweets=rng.randrange(300),
                lang=rng.choice(["en", "fr"]),
                reply_to=f"r{rng.randrange(i):04d}" if kind == 1 and i else None,
                retweet_of=f"r{rng.randrange(i):04d}" if kind == 2 and i else None,
            )
        )
    store = make_store(tmp_path, records)
    plan = SamplePlan(min_retweets=100, languages=frozenset({"en"}))
    picked = sample_sources(store, plan)
    oracle = sorted(
        (
            r
            for r in records
            if r.retweet_count >= 100 and r.in_reply_to is None and r.retweet_of is None and r.lang == "en"
        ),
        key=lambda r: (r.created_at, r.id),
    )
    assert picked == oracle


def test_plan_validation():
    with pytest.raises(ValueError):
        sample_sources(None, SamplePlan(min_retweets=0))


def test_determinism(tmp_path):
    store = make_store(tmp_path, [make_record(f"r{i}", at=i % 3, retweets=i % 7) for i in range(30)])
    plan = SamplePlan(min_retweets=2)
    assert sample_sources(store, plan) == sample_sources(store, plan)


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.tuples(st.integers(0, 200), st.integers(0, 10**6)), min_size=1, max_size=60),
    st.integers(1, 100),
    st.integers(1, 100),
)
def test_monotone_subset_property(tmp_path_factory, rows, t1, t2):
    lo, hi = sorted((t1, t2))
    tmp = tmp_path_factory.mktemp("mono")
    records = [make_record(f"r{i:03d}", at=at, retweets=c) for i, (c, at) in enumerate(rows)]
    store = make_store(tmp, records)
    low_sample = sample_sources(store, SamplePlan(min_retweets=lo))
    high_sample = sample_sources(store, SamplePlan(min_retweets=hi))
    assert len(high_sample) <= len(low_sample)
    assert {r.id for r in high_sample} <= {r.id for r in low_sample}
    for record in records:
        if record.retweet_count == lo:
            assert record.id in {r.id for r in low_sample}


# -- threshold sensitivity ----------------------------------------------------------


def test_sensitivity_all_nonrumour_is_zero(tmp_path):
    records = [make_record(f"r{i}", at=i, retweets=50 * (i + 1)) for i in range(6)]
    store = make_store(tmp_path, records)
    labels = {r.id: Label.NON_RUMOUR for r in records}
    for point in threshold_sensitivity(store, labels, [50, 100, 200]):
        assert point.rumour_pct == 0.0


def test_sensitivity_requires_increasing_thresholds(tmp_path):
    store = make_store(tmp_path, [make_record("a", retweets=5)])
    with pytest.raises(ValueError):
        threshold_sensitivity(store, {}, [100, 100])


def test_sensitivity_undefined_when_nothing_annotated(tmp_path):
    store = make_store(tmp_path, [make_record("a", retweets=500)])
    points = threshold_sensitivity(store, {}, [100])
    assert points[0].annotated == 0 and points[0].rumour_pct is None


def test_sensitivity_unsure_excluded_both_sides(tmp_path):
    records = [make_record(f"r{i}", at=i, retweets=100) for i in range(4)]
    store = make_store(tmp_path, records)
    labels = {"r0": Label.RUMOUR, "r1": Label.NON_RUMOUR, "r2": Label.UNSURE}
    (point,) = threshold_sensitivity(store, labels, [100])
    assert point.annotated == 2
    assert point.rumour_pct == 50.0


def test_sensitivity_matches_brute_force(tmp_path):
    rng = random.Random(33)
    records = [make_record(f"r{i:03d}", at=i, retweets=rng.randrange(400)) for i in range(300)]
    store = make_store(tmp_path, records)
    labels = {
        r.id: rng.choice([Label.RUMOUR, Label.NON_RUMOUR, Label.UNSURE])
        for r in records
        if rng.random() < 0.8
    }
    thresholds = [1, 50, 120, 300]
    points = threshold_sensitivity(store, labels, thresholds)
    for point in points:
        eligible = [r for r in records if r.retweet_count >= point.threshold]
        rumours = sum(1 for r in eligible if labels.get(r.id) == Label.RUMOUR)
        annotated = rumours + sum(1 for r in eligible if labels.get(r.id) == Label.NON_RUMOUR)
        assert point.annotated == annotated
        expected = round(100.0 * rumours / annotated, 2) if annotated else None
        assert point.rumour_pct == expected
