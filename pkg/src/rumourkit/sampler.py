"""Retweet-count distribution analysis and high-engagement source sampling.

Sampling keeps records with retweet_count >= min_retweets (inclusive bound:
a count exactly at the threshold is in). Source candidates exclude replies
and pure retweets by default so every sampled tweet can root a conversation.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .annostore import Label
from .corpus import CorpusStore
from .records import TweetRecord


class EmptyCorpusError(ValueError):
    """Distribution analysis over a store with no records."""


@dataclass
class RetweetDistribution:
    histogram: list[tuple[int, int]]  # (bucket lower bound, count), log-binned
    ccdf: list[tuple[int, int]]  # (threshold, number of records with count >= threshold)
    total: int

    def as_dict(self) -> dict:
        return {
            "histogram": [list(pair) for pair in self.histogram],
            "ccdf": [list(pair) for pair in self.ccdf],
            "total": self.total,
        }


@dataclass
class SamplePlan:
    min_retweets: int = 100
    languages: frozenset[str] | None = None
    exclude_replies: bool = True
    exclude_retweets: bool = True

    def validate(self) -> None:
        if self.min_retweets < 1:
            raise ValueError("min_retweets must be >= 1")

    def accepts(self, record: TweetRecord) -> bool:
        if record.retweet_count < self.min_retweets:
            return False
        if self.exclude_replies and record.is_reply:
            return False
        if self.exclude_retweets and record.is_retweet:
            return False
        if self.languages is not None and record.lang not in self.languages:
            return False
        return True


def log_grid(max_value: int) -> list[int]:
    """Thresholds 0, 1, 2, 5, 10, 20, 50, ... up to the first point above max_value."""
    points = [0]
    magnitude = 1
    while True:
        for mantissa in (1, 2, 5):
            value = mantissa * magnitude
            points.append(value)
            if value > max_value:
                return points
        magnitude *= 10


def compute_distribution(store: CorpusStore, extra_thresholds: Sequence[int] = ()) -> RetweetDistribution:
    counts = sorted(record.retweet_count for record in store.iter_records())
    if not counts:
        raise EmptyCorpusError("corpus store is empty")
    total = len(counts)
    grid = log_grid(counts[-1])
    thresholds = sorted(set(grid) | {int(t) for t in extra_thresholds})
    ccdf = [(t, total - bisect_left(counts, t)) for t in thresholds]
    histogram = []
    for lower, upper in zip(grid, grid[1:]):
        n = bisect_left(counts, upper) - bisect_left(counts, lower)
        histogram.append((lower, n))
        if lower > counts[-1]:
            break
    return RetweetDistribution(histogram=histogram, ccdf=ccdf, total=total)


def sample_sources(store: CorpusStore, plan: SamplePlan) -> list[TweetRecord]:
    """Exactly the records passing the plan, ordered by created_at then id."""
    plan.validate()
    picked = [record for record in store.iter_records() if plan.accepts(record)]
    picked.sort(key=lambda r: (r.created_at, r.id))
    return picked


@dataclass
class ThresholdPoint:
    threshold: int
    annotated: int  # sampled records with a rumour/non-rumour judgment
    rumour_pct: float | None  # percentage, 2 decimals; None when nothing annotated

    def as_dict(self) -> dict:
        return {"threshold": self.threshold, "annotated": self.annotated, "rumour_pct": self.rumour_pct}


def threshold_sensitivity(
    store: CorpusStore,
    labels: Mapping[str, Label],
    thresholds: Iterable[int],
    plan: SamplePlan | None = None,
) -> list[ThresholdPoint]:
    """Rumour fraction among annotated sampled tweets at each threshold.

    Unsure judgments count in neither the numerator nor the denominator.
    """
    thresholds = list(thresholds)
    if any(b <= a for a, b in zip(thresholds, thresholds[1:])):
        raise ValueError("thresholds must be strictly increasing")
    base = plan or SamplePlan()
    points = []
    for threshold in thresholds:
        probe = SamplePlan(
            min_retweets=threshold,
            languages=base.languages,
            exclude_replies=base.exclude_replies,
            exclude_retweets=base.exclude_retweets,
        )
        sampled = sample_sources(store, probe)
        rumours = 0
        annotated = 0
        for record in sampled:
            label = labels.get(record.id)
            if label == Label.RUMOUR:
                rumours += 1
                annotated += 1
            elif label == Label.NON_RUMOUR:
                annotated += 1
        pct = round(100.0 * rumours / annotated, 2) if annotated else None
        points.append(ThresholdPoint(threshold=threshold, annotated=annotated, rumour_pct=pct))
    return points
