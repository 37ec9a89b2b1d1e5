"""Tests for the synthetic corpus generator.

Everything downstream of ingestion is exercised against corpora built
here, so these tests pin down determinism, persona knob behavior, and
the on-disk corpus layout.
"""

from __future__ import annotations

import random
import statistics

import pytest

from caltrend.features import FEATURE_NAMES, extract_features
from caltrend.ingestion import NameLexicon, event_to_line, load_name_lexicon, parse_log, scan_pii
from caltrend.model import build_store
from caltrend.synth import (
    DEFAULT_PERSONAS,
    NAME_POOL,
    PersonaSpec,
    PersonaValidationError,
    default_corpus,
    generate_events,
    generate_user,
    full_scale_personas,
    plant_pii,
    write_corpus,
)

IDX = {name: i for i, name in enumerate(FEATURE_NAMES)}


def make_spec(**over) -> PersonaSpec:
    base = dict(
        name="probe",
        events_per_month_mean=12,
        events_per_month_spread=2,
        weekend_event_probability=0.2,
        band_weights=(0.2, 0.2, 0.2, 0.2, 0.2),
        work_pool=("budget meeting", "standup"),
        home_pool=("family dinner", "dentist"),
        modification_probability=0.3,
        months_active=3,
    )
    base.update(over)
    return PersonaSpec(**base)


class TestPersonaValidation:
    @pytest.mark.parametrize(
        "over,field",
        [
            ({"name": ""}, "name"),
            ({"events_per_month_mean": 0}, "events_per_month_mean"),
            ({"events_per_month_mean": -3}, "events_per_month_mean"),
            ({"events_per_month_spread": -0.5}, "events_per_month_spread"),
            ({"weekend_event_probability": 1.5}, "weekend_event_probability"),
            ({"weekend_event_probability": -0.01}, "weekend_event_probability"),
            ({"modification_probability": 2.0}, "modification_probability"),
            ({"work_share": -1.0}, "work_share"),
            ({"band_weights": (0.5, 0.5)}, "band_weights"),
            ({"band_weights": (0.6, 0.6, -0.2, 0.0, 0.0)}, "band_weights"),
            ({"band_weights": (0.2, 0.2, 0.2, 0.2, 0.1)}, "band_weights"),
            ({"months_active": 0}, "months_active"),
            ({"work_pool": ()}, "work_pool"),
            ({"timezone": "Mars/Olympus"}, "timezone"),
        ],
    )
    def test_invalid_field_named_in_error(self, over, field):
        spec = make_spec(**over)
        with pytest.raises(PersonaValidationError) as exc:
            spec.validate()
        assert field in str(exc.value)

    def test_valid_spec_passes(self):
        make_spec().validate()

    def test_band_weights_tolerance(self):
        # sum within 1e-9 of 1 is accepted
        w = (0.2, 0.2, 0.2, 0.2, 0.2 + 5e-10)
        make_spec(band_weights=w).validate()

    def test_default_personas_validate(self):
        assert len(DEFAULT_PERSONAS) == 3
        assert [p.name for p in DEFAULT_PERSONAS] == ["office", "night-owl", "family-heavy"]
        for spec in DEFAULT_PERSONAS:
            spec.validate()

    def test_generate_rejects_bad_spec(self):
        with pytest.raises(PersonaValidationError):
            generate_events([(make_spec(months_active=0), 2)], seed=1)

    def test_generate_rejects_zero_count(self):
        with pytest.raises(PersonaValidationError) as exc:
            generate_events([(make_spec(), 0)], seed=1)
        assert "probe" in str(exc.value)

    def test_generate_rejects_empty_persona_list(self):
        with pytest.raises(PersonaValidationError):
            generate_events([], seed=1)


class TestDeterminism:
    def test_same_seed_identical_events(self):
        personas = [(make_spec(), 4), (make_spec(name="other", work_share=0.1), 3)]
        a_events, a_truth = generate_events(personas, seed=42)
        b_events, b_truth = generate_events(personas, seed=42)
        assert a_events == b_events
        assert a_truth == b_truth

    def test_different_seed_differs(self):
        personas = [(make_spec(), 4)]
        a, _ = generate_events(personas, seed=1)
        b, _ = generate_events(personas, seed=2)
        assert a != b

    def test_write_corpus_byte_identical(self, tmp_path):
        personas = [(make_spec(), 3)]
        write_corpus(tmp_path / "a", personas, seed=9)
        write_corpus(tmp_path / "b", personas, seed=9)
        for fname in ("events.log", "truth.txt", "names.txt"):
            assert (tmp_path / "a" / fname).read_bytes() == (
                tmp_path / "b" / fname
            ).read_bytes()


class TestPersonaKnobs:
    def _users(self, spec: PersonaSpec, n: int, seed: int):
        events, _ = generate_events([(spec, n)], seed=seed)
        return build_store(events)

    def test_weekend_probability_zero(self):
        users = self._users(make_spec(weekend_event_probability=0.0), 5, seed=3)
        for records in users.values():
            vec = extract_features(records)
            assert vec[IDX["weekend_ratio"]] == 0.0
            assert vec[IDX["weekday_ratio"]] == 1.0
            for ev in records.events:
                assert ev.local_start().weekday() < 5

    def test_weekend_probability_one(self):
        users = self._users(make_spec(weekend_event_probability=1.0), 5, seed=3)
        for records in users.values():
            vec = extract_features(records)
            assert vec[IDX["weekend_ratio"]] == 1.0
            for ev in records.events:
                assert ev.local_start().weekday() >= 5

    def test_band_one_hot_morning(self):
        spec = make_spec(band_weights=(1.0, 0.0, 0.0, 0.0, 0.0))
        for records in self._users(spec, 4, seed=5).values():
            for ev in records.events:
                assert 6 <= ev.local_start().hour < 11

    def test_band_one_hot_night(self):
        spec = make_spec(band_weights=(0.0, 0.0, 0.0, 0.0, 1.0))
        for records in self._users(spec, 4, seed=5).values():
            for ev in records.events:
                h = ev.local_start().hour
                assert h >= 22 or h < 6

    def test_work_share_extremes(self):
        all_work = make_spec(work_share=1.0)
        for records in self._users(all_work, 3, seed=7).values():
            for ev in records.events:
                assert ev.summary in all_work.work_pool
        all_home = make_spec(work_share=0.0)
        for records in self._users(all_home, 3, seed=7).values():
            for ev in records.events:
                assert ev.summary in all_home.home_pool

    def test_modification_probability_extremes(self):
        never = make_spec(modification_probability=0.0)
        for records in self._users(never, 3, seed=11).values():
            assert extract_features(records)[IDX["modification_rate"]] == 0.0
        always = make_spec(modification_probability=1.0)
        for records in self._users(always, 3, seed=11).values():
            assert extract_features(records)[IDX["modification_rate"]] == 1.0

    def test_months_active_covered(self):
        # one event minimum per month, epoch January 2024, UTC persona
        spec = make_spec(months_active=14)
        for records in self._users(spec, 2, seed=13).values():
            months = {(ev.local_start().year, ev.local_start().month) for ev in records.events}
            assert months == {(2024, m) for m in range(1, 13)} | {(2025, 1), (2025, 2)}

    def test_timezone_applied(self):
        spec = make_spec(timezone="Asia/Tokyo", band_weights=(1.0, 0.0, 0.0, 0.0, 0.0))
        events = generate_user(random.Random(1), 1, spec)
        for ev in events:
            assert ev.timezone == "Asia/Tokyo"
            assert 6 <= ev.local_start().hour < 11
            # UTC hour is shifted, so the band is a local-time notion
            assert ev.start.hour not in range(6, 11) or ev.start.utcoffset().total_seconds() == 0

    def test_office_persona_daytime_mass(self):
        # office band mass on morning+afternoon is 0.72; with 100 users the
        # extracted feature mean sits well above the 0.7 floor
        office = next(p for p in DEFAULT_PERSONAS if p.name == "office")
        users = self._users(office, 100, seed=17)
        means = [
            extract_features(records)[IDX["morning"]]
            + extract_features(records)[IDX["afternoon"]]
            for records in users.values()
        ]
        assert statistics.mean(means) >= 0.7


class TestCorpusShape:
    def test_truth_ids_contiguous(self):
        personas = [(make_spec(name="a"), 3), (make_spec(name="b"), 2)]
        events, truth = generate_events(personas, seed=1)
        assert sorted(truth) == [1, 2, 3, 4, 5]
        assert [truth[i] for i in range(1, 6)] == ["a", "a", "a", "b", "b"]
        assert {ev.user_id for ev in events} == set(truth)

    def test_event_ids_unique(self):
        events, _ = generate_events([(make_spec(), 6)], seed=2)
        ids = [ev.event_id for ev in events]
        assert len(ids) == len(set(ids))

    def test_ingestion_round_trip_rejects_nothing(self):
        events, _ = default_corpus(seed=19, users_per_persona=3)
        lines = [event_to_line(ev) for ev in events]
        parsed, report = parse_log(lines)
        assert report.rejected == 0
        assert report.parsed == len(events)
        assert parsed == events

    def test_persona_contrast(self, small_corpus):
        events, truth = small_corpus
        by_persona: dict[str, list[float]] = {"office": [], "night-owl": [], "family-heavy": []}
        for uid, records in build_store(events).items():
            by_persona[truth[uid]].append(extract_features(records))
        office_weekend = statistics.mean(v[IDX["weekend_ratio"]] for v in by_persona["office"])
        family_weekend = statistics.mean(v[IDX["weekend_ratio"]] for v in by_persona["family-heavy"])
        office_night = statistics.mean(v[IDX["night"]] for v in by_persona["office"])
        owl_night = statistics.mean(v[IDX["night"]] for v in by_persona["night-owl"])
        assert office_weekend < 0.1 < 0.3 < family_weekend
        assert office_night < 0.1 < 0.3 < owl_night


class TestWriteCorpus:
    def test_files_and_counts(self, tmp_path):
        personas = [(make_spec(), 3), (make_spec(name="b"), 2)]
        stats = write_corpus(tmp_path, personas, seed=23)
        mem_events, mem_truth = generate_events(personas, seed=23)
        assert stats == {"users": 5, "events": len(mem_events)}

        parsed, report = parse_log((tmp_path / "events.log").read_text("utf-8").splitlines())
        assert report.rejected == 0
        assert parsed == mem_events

        truth_lines = (tmp_path / "truth.txt").read_text("utf-8").splitlines()
        assert truth_lines == [f"{uid}\t{name}" for uid, name in sorted(mem_truth.items())]

        lexicon = load_name_lexicon(tmp_path / "names.txt")
        assert len(lexicon) == len(NAME_POOL)
        assert "priya" in lexicon and "Stefan" in lexicon

    def test_creates_directory(self, tmp_path):
        target = tmp_path / "nested" / "corpus"
        write_corpus(target, [(make_spec(), 1)], seed=1)
        assert (target / "events.log").exists()


class TestFullScale:
    def test_counts_and_expected_volume(self):
        personas = full_scale_personas()
        assert sum(count for _, count in personas) == 1025
        expected = 0.0
        for spec, count in personas:
            spec.validate()
            assert spec.months_active == 24
            expected += count * spec.months_active * spec.events_per_month_mean
        assert abs(expected - 1_650_000) / 1_650_000 < 0.01

    def test_custom_scale(self):
        personas = full_scale_personas(users=30, target_events=7200)
        assert sum(count for _, count in personas) == 30
        # 7200 / 30 users / 24 months = 10 events per user month
        assert personas[0][0].events_per_month_mean == pytest.approx(10.0)


class TestPlantPii:
    def _base_events(self):
        events, _ = default_corpus(seed=29, users_per_persona=2)
        return events

    def test_count_and_cycle(self):
        events = self._base_events()
        mutated, planted = plant_pii(events, seed=31, count=40)
        assert len(planted) == 40
        assert len(mutated) == len(events)
        classes = [cls for cls, _ in planted]
        assert classes == ["PHONE", "EMAIL", "ADDR", "NAME"] * 10

    def test_planted_text_present(self):
        events = self._base_events()
        mutated, planted = plant_pii(events, seed=31, count=40)
        summaries = "\n".join(ev.summary for ev in mutated)
        for _, text in planted:
            assert text in summaries

    def test_scanner_finds_each_plant(self):
        events = self._base_events()
        mutated, planted = plant_pii(events, seed=37, count=20)
        lexicon = NameLexicon(NAME_POOL)
        changed = [
            ev.summary
            for ev, orig in zip(mutated, events)
            if ev.summary != orig.summary
        ]
        assert len(changed) == 20
        for (cls, text), summary in zip(planted, changed):
            hits = scan_pii(summary, lexicon)
            assert any(h_cls == cls for h_cls, _ in hits), (cls, text, summary)

    def test_deterministic(self):
        events = self._base_events()
        a = plant_pii(events, seed=41, count=12)
        b = plant_pii(events, seed=41, count=12)
        assert a == b

    def test_input_not_mutated(self):
        events = self._base_events()
        before = [ev.summary for ev in events]
        plant_pii(events, seed=43, count=8)
        assert [ev.summary for ev in events] == before

    def test_too_many_plants_rejected(self):
        events = self._base_events()[:5]
        with pytest.raises(ValueError):
            plant_pii(events, seed=1, count=6)
