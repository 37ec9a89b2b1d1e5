"""Shared domain types and the canonical in-memory event store.

Everything downstream (labeling, features, projection, temporal views,
the server) consumes the types defined here. Timestamps are stored in
UTC; the original IANA zone name is kept on each event so that
wall-clock computations (hour bands, weekdays, calendar months) happen
in the user's local time.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime
from enum import Enum
from functools import lru_cache
from zoneinfo import ZoneInfo

__all__ = [
    "LifeMode",
    "ScheduleEvent",
    "UserRecord",
    "DuplicateEventIdError",
    "EmptyUserError",
    "build_store",
]

# All unlabeled events share one frozenset; at corpus scale the per-event
# allocation is measurable.
NO_LABELS: frozenset["LifeMode"] = frozenset()


class LifeMode(Enum):
    """The two life facets an event can belong to."""

    WORK = "Work"
    HOME = "Home"


@lru_cache(maxsize=None)
def _zone(name: str) -> ZoneInfo:
    return ZoneInfo(name)


@dataclass(frozen=True, slots=True)
class ScheduleEvent:
    """One calendar entry.

    ``start``/``end``/``created``/``updated`` are timezone-aware UTC
    datetimes. ``timezone`` is the IANA zone the event was scheduled in;
    use :meth:`local_start` for wall-clock semantics.
    """

    event_id: str
    user_id: int
    summary: str
    start: datetime
    end: datetime
    created: datetime
    updated: datetime
    timezone: str
    attendee_count: int = 0
    is_creator: bool = False
    labels: frozenset[LifeMode] = NO_LABELS

    def __post_init__(self) -> None:
        if self.end < self.start:
            raise ValueError(f"event {self.event_id}: end < start")
        if self.updated < self.created:
            raise ValueError(f"event {self.event_id}: updated < created")
        if self.user_id < 0:
            raise ValueError(f"event {self.event_id}: negative user_id")
        if self.attendee_count < 0:
            raise ValueError(f"event {self.event_id}: negative attendee_count")

    def local_start(self) -> datetime:
        """Event start in the event's own zone (wall clock)."""
        return self.start.astimezone(_zone(self.timezone))

    def local_end(self) -> datetime:
        return self.end.astimezone(_zone(self.timezone))

    def with_labels(self, labels: frozenset[LifeMode]) -> "ScheduleEvent":
        return replace(self, labels=labels if labels else NO_LABELS)

    def with_summary(self, summary: str) -> "ScheduleEvent":
        return replace(self, summary=summary)


@dataclass(slots=True)
class UserRecord:
    """All events of one user, sorted by start time."""

    user_id: int
    events: list[ScheduleEvent] = field(default_factory=list)
    active_months: int = 1

    def __len__(self) -> int:
        return len(self.events)


class DuplicateEventIdError(ValueError):
    def __init__(self, event_id: str):
        super().__init__(f"duplicate event_id: {event_id!r}")
        self.event_id = event_id


class EmptyUserError(ValueError):
    pass


def _count_active_months(events: list[ScheduleEvent]) -> int:
    # Distinct (year, month) pairs with at least one event, in local time.
    # A span with gaps therefore counts only the occupied months.
    months = {(ls.year, ls.month) for ls in (e.local_start() for e in events)}
    return max(1, len(months))


def build_store(events: list[ScheduleEvent]) -> dict[int, UserRecord]:
    """Partition events into per-user records.

    Events are grouped by ``user_id``, sorted by start time (ties broken
    by event_id so the result is deterministic), and ``active_months``
    is computed per user. Raises :class:`DuplicateEventIdError` if two
    events share an id.
    """
    seen: set[str] = set()
    by_user: dict[int, list[ScheduleEvent]] = {}
    for ev in events:
        if ev.event_id in seen:
            raise DuplicateEventIdError(ev.event_id)
        seen.add(ev.event_id)
        by_user.setdefault(ev.user_id, []).append(ev)

    store: dict[int, UserRecord] = {}
    for user_id in sorted(by_user):
        evs = sorted(by_user[user_id], key=lambda e: (e.start, e.event_id))
        store[user_id] = UserRecord(
            user_id=user_id,
            events=evs,
            active_months=_count_active_months(evs),
        )
    return store
