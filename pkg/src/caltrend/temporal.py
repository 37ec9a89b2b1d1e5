"""Temporal aggregations: day grids, the 7x12 weekly heatmap with
per-cell keywords and diff mode, keyword distributions, glyph summaries.

Conventions shared by every operation here:

* weekday index 0 = Sunday .. 6 = Saturday;
* two-hour segments 0..11, segment s covering local hours [2s, 2s+2);
* an event is bucketed by its *start* only (count semantics; spans do
  not smear across segments) except in :func:`day_grid`, which keeps
  full spans and clips them at midnight;
* all clock decisions use the event's local wall time.

Everything is a pure function of its inputs, so heatmaps over disjoint
user sets merge by cellwise addition.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta
from typing import Iterable

from .lifemode import mode_counter, tokenize
from .model import LifeMode, ScheduleEvent, UserRecord

__all__ = [
    "DayGridCell",
    "WeeklyHeatmap",
    "GlyphSummary",
    "KeywordDistribution",
    "day_grid",
    "weekly_heatmap",
    "heatmap_diff",
    "cell_keywords",
    "inline_keyword_limit",
    "keyword_distribution",
    "glyph_summary",
]

N_WEEKDAYS = 7
N_SEGMENTS = 12


def _weekday_sun0(d: date | datetime) -> int:
    # datetime.weekday(): Monday=0..Sunday=6; we want Sunday=0..Saturday=6
    return (d.weekday() + 1) % 7


def _segment(hour: int) -> int:
    return hour // 2


@dataclass(frozen=True)
class DayGridCell:
    """One event's slice of one local day.

    ``start_hour``/``end_hour`` are fractional hours since local
    midnight; ``end_hour`` may be 24.0 when the slice runs to the end of
    the day. A zero-duration event yields a single point cell with
    start == end.
    """

    day: date
    start_hour: float
    end_hour: float
    event_id: str
    labels: frozenset[LifeMode]

    def __post_init__(self) -> None:
        if not 0.0 <= self.start_hour <= self.end_hour <= 24.0:
            raise ValueError("cell hours out of range")


def _hours_since_midnight(dt: datetime) -> float:
    return dt.hour + dt.minute / 60 + dt.second / 3600 + dt.microsecond / 3.6e9


def day_grid(
    record: UserRecord, window_start: date, window_end: date
) -> list[DayGridCell]:
    """Cells for every event intersecting [window_start, window_end].

    Events are clipped at midnight boundaries, one cell per local day
    touched. Raises ValueError on an inverted range.
    """
    if window_end < window_start:
        raise ValueError("inverted range")
    cells: list[DayGridCell] = []
    for ev in record.events:
        # naive local wall-clock arithmetic; a DST backward jump can
        # make the local end precede the start, clamp to zero duration
        ls = ev.local_start().replace(tzinfo=None)
        le = ev.local_end().replace(tzinfo=None)
        if le < ls:
            le = ls
        if le.date() < window_start or ls.date() > window_end:
            continue
        if ls == le:
            if window_start <= ls.date() <= window_end:
                h = _hours_since_midnight(ls)
                cells.append(DayGridCell(ls.date(), h, h, ev.event_id, ev.labels))
            continue
        day = max(ls.date(), window_start)
        last = min(le.date(), window_end)
        while day <= last:
            day_start = datetime.combine(day, datetime.min.time())
            day_end = day_start + timedelta(days=1)
            seg_start = max(ls, day_start)
            seg_end = min(le, day_end)
            if seg_end > seg_start:
                start_h = _hours_since_midnight(seg_start)
                end_h = 24.0 if seg_end == day_end else _hours_since_midnight(seg_end)
                cells.append(DayGridCell(day, start_h, end_h, ev.event_id, ev.labels))
            day += timedelta(days=1)
    return cells


@dataclass
class WeeklyHeatmap:
    """7x12 start-bucketed event counts plus per-cell token counters.

    counts[w][s]: events starting on weekday w (Sun=0) in segment s.
    row_marginals has one entry per segment, col_marginals one per
    weekday; both sum to the total event count.
    """

    counts: list[list[int]]
    cell_tokens: list[list[Counter]]
    mode: LifeMode | None = None

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    @property
    def row_marginals(self) -> list[int]:
        return [
            sum(self.counts[w][s] for w in range(N_WEEKDAYS))
            for s in range(N_SEGMENTS)
        ]

    @property
    def col_marginals(self) -> list[int]:
        return [sum(self.counts[w]) for w in range(N_WEEKDAYS)]


def _empty_grid() -> tuple[list[list[int]], list[list[Counter]]]:
    counts = [[0] * N_SEGMENTS for _ in range(N_WEEKDAYS)]
    tokens = [[Counter() for _ in range(N_SEGMENTS)] for _ in range(N_WEEKDAYS)]
    return counts, tokens


def _passes(ev: ScheduleEvent, mode: LifeMode | None) -> bool:
    return mode is None or mode in ev.labels


def weekly_heatmap(
    records: Iterable[UserRecord], mode: LifeMode | None = None
) -> WeeklyHeatmap:
    """Aggregate one or more users into the weekly grid.

    mode=None counts every event; mode=WORK/HOME counts only events
    carrying that label. Empty input yields the zero grid.
    """
    counts, tokens = _empty_grid()
    for record in records:
        for ev in record.events:
            if not _passes(ev, mode):
                continue
            local = ev.local_start()
            w = _weekday_sun0(local)
            s = _segment(local.hour)
            counts[w][s] += 1
            tokens[w][s].update(tokenize(ev.summary))
    return WeeklyHeatmap(counts=counts, cell_tokens=tokens, mode=mode)


def heatmap_diff(a: WeeklyHeatmap, b: WeeklyHeatmap) -> list[list[int]]:
    """Cellwise a − b; signed 7x12 grid."""
    return [
        [a.counts[w][s] - b.counts[w][s] for s in range(N_SEGMENTS)]
        for w in range(N_WEEKDAYS)
    ]


def _check_cell(weekday: int, segment: int) -> None:
    if not (0 <= weekday < N_WEEKDAYS and 0 <= segment < N_SEGMENTS):
        raise IndexError(f"cell ({weekday}, {segment}) out of range")


def cell_keywords(
    heatmap: WeeklyHeatmap, weekday: int, segment: int, n: int = 10
) -> list[tuple[str, int]]:
    """Top n keywords of one cell, count descending, ties lexicographic."""
    _check_cell(weekday, segment)
    counter = heatmap.cell_tokens[weekday][segment]
    ranked = sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:n]


def inline_keyword_limit(cell_count: int, cap: int = 10) -> int:
    """How many keywords to surface inline: scales with cell frequency,
    ceil(count/2), capped (the tooltip always carries up to the cap)."""
    return min(cap, math.ceil(cell_count / 2))


@dataclass(frozen=True)
class KeywordDistribution:
    keyword: str
    weekday_counts: tuple[int, ...]  # 7, Sun..Sat
    segment_counts: tuple[int, ...]  # 12
    total: int

    def __post_init__(self) -> None:
        if sum(self.weekday_counts) != self.total or sum(self.segment_counts) != self.total:
            raise ValueError("marginals must sum to the matched-event count")


def keyword_distribution(
    records: Iterable[UserRecord], keyword: str
) -> KeywordDistribution:
    """Weekday and segment histograms of events whose tokenized summary
    contains the keyword. Unknown keyword yields zero vectors."""
    if not keyword:
        raise ValueError("keyword must be non-empty")
    by_weekday = [0] * N_WEEKDAYS
    by_segment = [0] * N_SEGMENTS
    total = 0
    for record in records:
        for ev in record.events:
            if keyword not in tokenize(ev.summary):
                continue
            local = ev.local_start()
            by_weekday[_weekday_sun0(local)] += 1
            by_segment[_segment(local.hour)] += 1
            total += 1
    return KeywordDistribution(
        keyword=keyword,
        weekday_counts=tuple(by_weekday),
        segment_counts=tuple(by_segment),
        total=total,
    )


@dataclass(frozen=True)
class GlyphSummary:
    """Compact per-user summary backing the scatter glyph view.

    A multi-labeled event counts toward both the work and the home
    fraction, so the three fractions can sum to slightly more than 1;
    unlabeled_fraction closes the books against labeled events.
    """

    user_id: int
    total_events: int
    work_fraction: float
    home_fraction: float
    unlabeled_fraction: float
    hourly_counts: tuple[int, ...]  # 24 local start-hour buckets

    def __post_init__(self) -> None:
        if len(self.hourly_counts) != 24:
            raise ValueError("hourly_counts must have 24 entries")
        if sum(self.hourly_counts) != self.total_events:
            raise ValueError("hourly counts must sum to total_events")


def glyph_summary(record: UserRecord) -> GlyphSummary:
    if not record.events:
        raise ValueError(f"empty user {record.user_id}")
    hours = [0] * 24
    for ev in record.events:
        hours[ev.local_start().hour] += 1
    n = len(record.events)
    modes = mode_counter(record.events)
    return GlyphSummary(
        user_id=record.user_id,
        total_events=n,
        work_fraction=modes["work"] / n,
        home_fraction=modes["home"] / n,
        unlabeled_fraction=modes["unlabeled"] / n,
        hourly_counts=tuple(hours),
    )
