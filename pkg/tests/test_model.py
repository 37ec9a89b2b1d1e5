from datetime import datetime, timedelta, timezone

import pytest
from hypothesis import given, strategies as st

from caltrend.model import (
    NO_LABELS,
    DuplicateEventIdError,
    LifeMode,
    ScheduleEvent,
    build_store,
)
from tests.conftest import make_event

UTC = timezone.utc


def test_lifemode_has_exactly_two_members():
    assert {m.value for m in LifeMode} == {"Work", "Home"}


class TestScheduleEventInvariants:
    def test_end_before_start_rejected(self):
        start = datetime(2024, 3, 5, 9, tzinfo=UTC)
        with pytest.raises(ValueError, match="end < start"):
            ScheduleEvent(
                event_id="x",
                user_id=1,
                summary="s",
                start=start,
                end=start - timedelta(minutes=1),
                created=start,
                updated=start,
                timezone="UTC",
            )

    def test_updated_before_created_rejected(self):
        start = datetime(2024, 3, 5, 9, tzinfo=UTC)
        with pytest.raises(ValueError, match="updated < created"):
            ScheduleEvent(
                event_id="x",
                user_id=1,
                summary="s",
                start=start,
                end=start,
                created=start,
                updated=start - timedelta(seconds=1),
                timezone="UTC",
            )

    def test_negative_user_id_rejected(self):
        with pytest.raises(ValueError, match="user_id"):
            make_event(user_id=-1)

    def test_negative_attendee_count_rejected(self):
        with pytest.raises(ValueError, match="attendee_count"):
            make_event(attendee_count=-2)

    def test_unlabeled_events_share_the_empty_set(self):
        a = make_event(event_id="a")
        b = make_event(event_id="b")
        assert a.labels is NO_LABELS and b.labels is NO_LABELS

    def test_with_labels_round_trip(self):
        ev = make_event().with_labels(frozenset({LifeMode.WORK}))
        assert ev.labels == frozenset({LifeMode.WORK})
        assert ev.with_labels(frozenset()).labels is NO_LABELS


def test_local_start_uses_wall_clock():
    # 14:30 UTC on 2024-03-05 is 09:30 in New York (EST, UTC-5).
    ev = make_event(start=datetime(2024, 3, 5, 14, 30, tzinfo=UTC), tz="America/New_York")
    local = ev.local_start()
    assert (local.hour, local.minute) == (9, 30)
    assert ev.local_end().hour == 10


class TestBuildStore:
    def test_partitions_by_user(self):
        events = [make_event(event_id=f"a{i}", user_id=7) for i in range(3)]
        events += [make_event(event_id=f"b{i}", user_id=9) for i in range(2)]
        store = build_store(events)
        assert set(store) == {7, 9}
        assert len(store[7]) == 3 and len(store[9]) == 2

    def test_empty_input_gives_empty_store(self):
        assert build_store([]) == {}

    def test_active_months_counts_distinct_occupied_months(self):
        events = [
            make_event(event_id="jan", user_id=0, start=datetime(2024, 1, 10, 9)),
            make_event(event_id="mar", user_id=0, start=datetime(2024, 3, 10, 9)),
        ]
        assert build_store(events)[0].active_months == 2

    def test_active_months_distinguishes_years(self):
        events = [
            make_event(event_id="a", user_id=0, start=datetime(2023, 5, 1, 9)),
            make_event(event_id="b", user_id=0, start=datetime(2024, 5, 1, 9)),
        ]
        assert build_store(events)[0].active_months == 2

    def test_active_months_is_local_not_utc(self):
        # 2024-02-01 03:00 UTC is still January 31st in Los Angeles.
        events = [
            make_event(
                event_id="a",
                user_id=0,
                start=datetime(2024, 2, 1, 3, tzinfo=UTC),
                tz="America/Los_Angeles",
            ),
            make_event(
                event_id="b",
                user_id=0,
                start=datetime(2024, 1, 15, 12, tzinfo=UTC),
                tz="America/Los_Angeles",
            ),
        ]
        assert build_store(events)[0].active_months == 1

    def test_duplicate_event_id_rejected_with_id(self):
        events = [make_event(event_id="dup"), make_event(event_id="dup", user_id=2)]
        with pytest.raises(DuplicateEventIdError) as exc:
            build_store(events)
        assert exc.value.event_id == "dup"

    def test_events_sorted_by_start(self):
        late = make_event(event_id="late", start=datetime(2024, 6, 1, 9))
        early = make_event(event_id="early", start=datetime(2024, 2, 1, 9))
        store = build_store([late, early])
        assert [e.event_id for e in store[1].events] == ["early", "late"]

    def test_records_carry_matching_user_id(self, small_corpus):
        events, _ = small_corpus
        store = build_store(events)
        for uid, record in store.items():
            assert record.user_id == uid
            assert all(e.user_id == uid for e in record.events)

    @given(
        st.lists(
            st.tuples(st.integers(min_value=0, max_value=5), st.integers(0, 400)),
            max_size=60,
        )
    )
    def test_event_conservation(self, assignments):
        events = [
            make_event(
                event_id=f"e{i}",
                user_id=uid,
                start=datetime(2024, 1, 1, tzinfo=UTC) + timedelta(hours=off),
            )
            for i, (uid, off) in enumerate(assignments)
        ]
        store = build_store(events)
        assert sum(len(r) for r in store.values()) == len(events)
        assert {e.event_id for r in store.values() for e in r.events} == {
            e.event_id for e in events
        }

    def test_determinism(self, small_corpus):
        events, _ = small_corpus
        a = build_store(list(events))
        b = build_store(list(events))
        assert list(a) == list(b)
        for uid in a:
            assert a[uid].events == b[uid].events
            assert a[uid].active_months == b[uid].active_months
