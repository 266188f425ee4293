"""Summary analytics over built threads and the annotation log.

Covers the per-day rumour distribution table (with story deduplication
across days), trimmed annotation-time means, hourly activity histograms for
rumourous threads, and conversation-size distributions per label. All
binning and day grouping is UTC.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Iterable, Sequence

from .annostore import AnnotationStore, Label
from .records import day_of, hour_of
from .threads import Thread


class EmptyInputError(ValueError):
    """A statistic was requested over no values."""


class EmptyLabelError(ValueError):
    """A size distribution was requested for a label with no threads."""


class UnknownDateError(KeyError):
    """No threads exist on the requested date."""


@dataclass
class DayRow:
    date: str
    rumour_count: int
    rumour_pct: float | None  # percentage rounded to 1 decimal; None when nothing annotated
    total_threads: int
    avg_thread_size: float
    median_thread_size: float
    story_count: int

    def as_dict(self) -> dict:
        return {
            "date": self.date,
            "rumour_count": self.rumour_count,
            "rumour_pct": self.rumour_pct,
            "total_threads": self.total_threads,
            "avg_thread_size": self.avg_thread_size,
            "median_thread_size": self.median_thread_size,
            "story_count": self.story_count,
        }


@dataclass
class DayTable:
    rows: list[DayRow]
    overall: DayRow

    def as_dict(self) -> dict:
        return {"rows": [row.as_dict() for row in self.rows], "overall": self.overall.as_dict()}


def _median(values: Sequence[float]) -> float:
    return float(statistics.median(values))


def _row(date: str, threads: list[Thread], store: AnnotationStore, story_ids: set[str]) -> DayRow:
    sizes = [thread.reply_count for thread in threads]
    rumours = 0
    annotated = 0
    for thread in threads:
        judgment = store.current.get(thread.source.id)
        if judgment is None or judgment.label == Label.UNSURE:
            continue
        annotated += 1
        if judgment.label == Label.RUMOUR:
            rumours += 1
    pct = round(100.0 * rumours / annotated, 1) if annotated else None
    return DayRow(
        date=date,
        rumour_count=rumours,
        rumour_pct=pct,
        total_threads=len(threads),
        avg_thread_size=round(sum(sizes) / len(sizes), 1),
        median_thread_size=_median(sizes),
        story_count=len(story_ids),
    )


def day_table(threads: Iterable[Thread], store: AnnotationStore) -> DayTable:
    """Per-day rows plus an overall row whose story count deduplicates
    stories that span several days (each counted once)."""
    threads = list(threads)
    if not threads:
        raise EmptyInputError("no threads")
    by_day: dict[str, list[Thread]] = {}
    for thread in threads:
        by_day.setdefault(thread.source.day, []).append(thread)
    day_stories: dict[str, set[str]] = {}
    for day, members in by_day.items():
        stories = set()
        for thread in members:
            judgment = store.current.get(thread.source.id)
            if judgment is not None and judgment.label == Label.RUMOUR and judgment.story_id:
                stories.add(judgment.story_id)
        day_stories[day] = stories
    rows = [_row(day, by_day[day], store, day_stories[day]) for day in sorted(by_day)]
    all_stories = set().union(*day_stories.values()) if day_stories else set()
    overall = _row("overall", threads, store, all_stories)
    return DayTable(rows=rows, overall=overall)


def format_day_row(row: DayRow) -> str:
    pct = "-" if row.rumour_pct is None else f"{row.rumour_pct:.1f}%"
    med = int(row.median_thread_size) if row.median_thread_size.is_integer() else row.median_thread_size
    return (
        f"{row.date}: {row.rumour_count} ({pct}), {row.total_threads}, "
        f"avg {row.avg_thread_size:.1f}, med {med}, {row.story_count} stories"
    )


def day_table_csv(table: DayTable) -> str:
    lines = ["date,rumour_count,rumour_pct,total_threads,avg_thread_size,median_thread_size,story_count"]
    for row in table.rows + [table.overall]:
        pct = "" if row.rumour_pct is None else f"{row.rumour_pct:.1f}"
        lines.append(
            f"{row.date},{row.rumour_count},{pct},{row.total_threads},"
            f"{row.avg_thread_size:.1f},{row.median_thread_size},{row.story_count}"
        )
    return "\n".join(lines) + "\n"


# -- timing -------------------------------------------------------------------


def trimmed_mean(values: Sequence[float], trim_fraction: float = 0.05) -> float:
    """Mean after dropping floor(trim_fraction * n) values from each sorted end."""
    if not values:
        raise EmptyInputError("trimmed_mean of no values")
    if not 0 <= trim_fraction < 0.5:
        raise ValueError("trim_fraction must be in [0, 0.5)")
    ordered = sorted(values)
    k = math.floor(trim_fraction * len(ordered))
    kept = ordered[k : len(ordered) - k]
    return math.fsum(kept) / len(kept)


@dataclass
class TimingStats:
    overall_mean_s: float
    rumour_mean_s: float | None
    nonrumour_mean_s: float | None
    n_durations: int
    trim_fraction: float

    def as_dict(self) -> dict:
        return {
            "overall_mean_s": self.overall_mean_s,
            "rumour_mean_s": self.rumour_mean_s,
            "nonrumour_mean_s": self.nonrumour_mean_s,
            "n_durations": self.n_durations,
            "trim_fraction": self.trim_fraction,
        }


def timing_stats(durations: list[tuple[str, Label, float]], trim_fraction: float = 0.05) -> TimingStats:
    if not durations:
        raise EmptyInputError("no annotation durations")
    seconds = [s for _, _, s in durations]
    rumour = [s for _, label, s in durations if label == Label.RUMOUR]
    nonrumour = [s for _, label, s in durations if label == Label.NON_RUMOUR]
    return TimingStats(
        overall_mean_s=trimmed_mean(seconds, trim_fraction),
        rumour_mean_s=trimmed_mean(rumour, trim_fraction) if rumour else None,
        nonrumour_mean_s=trimmed_mean(nonrumour, trim_fraction) if nonrumour else None,
        n_durations=len(seconds),
        trim_fraction=trim_fraction,
    )


# -- histograms ------------------------------------------------------------------


@dataclass
class HourHistogram:
    date: str
    sources: list[int]  # 24 hourly bins, UTC
    replies: list[int]

    def as_dict(self) -> dict:
        return {"date": self.date, "sources": self.sources, "replies": self.replies}


def hourly_histogram(threads: Iterable[Thread], store: AnnotationStore, date: str) -> HourHistogram:
    """Hourly counts of rumourous source tweets and their replies on `date`."""
    threads = list(threads)
    if date not in {thread.source.day for thread in threads}:
        raise UnknownDateError(date)
    sources = [0] * 24
    replies = [0] * 24
    for thread in threads:
        judgment = store.current.get(thread.source.id)
        if judgment is None or judgment.label != Label.RUMOUR:
            continue
        if thread.source.day == date:
            sources[hour_of(thread.source.created_at)] += 1
        for node in thread.nodes:
            if day_of(node.record.created_at) == date:
                replies[hour_of(node.record.created_at)] += 1
    return HourHistogram(date=date, sources=sources, replies=replies)


# -- conversation sizes ------------------------------------------------------------


@dataclass
class SizeSummary:
    n: int
    min: int
    q1: float
    median: float
    q3: float
    max: int
    mean: float

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "min": self.min,
            "q1": self.q1,
            "median": self.median,
            "q3": self.q3,
            "max": self.max,
            "mean": self.mean,
        }


def _summary(sizes: list[int]) -> SizeSummary:
    if len(sizes) == 1:
        value = sizes[0]
        return SizeSummary(n=1, min=value, q1=float(value), median=float(value), q3=float(value), max=value, mean=float(value))
    q1, med, q3 = statistics.quantiles(sizes, n=4, method="inclusive")  # linear interpolation
    return SizeSummary(
        n=len(sizes),
        min=min(sizes),
        q1=float(q1),
        median=float(med),
        q3=float(q3),
        max=max(sizes),
        mean=sum(sizes) / len(sizes),
    )


def size_distribution(
    threads: Iterable[Thread],
    store: AnnotationStore,
    labels: Sequence[Label] = (Label.RUMOUR, Label.NON_RUMOUR),
) -> dict[Label, SizeSummary]:
    """Reply-count distribution summaries per current label."""
    sizes: dict[Label, list[int]] = {label: [] for label in labels}
    for thread in threads:
        judgment = store.current.get(thread.source.id)
        if judgment is not None and judgment.label in sizes:
            sizes[judgment.label].append(thread.reply_count)
    out = {}
    for label in labels:
        if not sizes[label]:
            raise EmptyLabelError(f"no annotated threads with label {label.value}")
        out[label] = _summary(sorted(sizes[label]))
    return out


# -- bundle ------------------------------------------------------------------------


def build_report(
    threads: Iterable[Thread],
    store: AnnotationStore,
    trim_fraction: float = 0.05,
    session_gap: float = 600.0,
) -> dict:
    """The report.json payload: day table, timing, hourly histograms, sizes."""
    threads = list(threads)
    table = day_table(threads, store)
    durations = store.annotation_durations(session_gap)
    timing = timing_stats(durations, trim_fraction).as_dict() if durations else None
    hourly = {}
    for row in table.rows:
        hourly[row.date] = hourly_histogram(threads, store, row.date).as_dict()
    sizes = {}
    for label in (Label.RUMOUR, Label.NON_RUMOUR, Label.UNSURE):
        try:
            summary = size_distribution(threads, store, labels=(label,))
        except EmptyLabelError:
            continue
        sizes[label.value] = summary[label].as_dict()
    return {
        "schema_version": 1,
        "day_table": table.as_dict(),
        "timing": timing,
        "hourly": hourly,
        "sizes": sizes,
        "parameters": {"trim_fraction": trim_fraction, "session_gap_s": session_gap},
    }
