"""Deterministic persona-based synthetic calendar corpora.

The real corpus behind this system is private, so every pipeline test
runs on synthetic users generated here. Generation is single-threaded
and driven by one ``random.Random(seed)``, making output byte-identical
across runs for a given seed.

Three contrasting default personas ship in-repo (office, night-owl,
family-heavy); their feature clusters are far enough apart to anchor
the projection quality tests. A truth sidecar records which persona
produced each user.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta, timezone
from pathlib import Path
from typing import Iterable, Iterator, Sequence
from zoneinfo import ZoneInfo

from .ingestion import event_to_line
from .model import ScheduleEvent

__all__ = [
    "PersonaSpec",
    "PersonaValidationError",
    "DEFAULT_PERSONAS",
    "NAME_POOL",
    "generate_events",
    "generate_user",
    "write_corpus",
    "default_corpus",
    "full_scale_personas",
    "plant_pii",
]

_EPOCH = date(2024, 1, 1)
_BANDS = ("morning", "lunch", "afternoon", "evening", "night")
# start hours available per band
_BAND_HOURS = {
    "morning": tuple(range(6, 11)),
    "lunch": tuple(range(11, 14)),
    "afternoon": tuple(range(14, 18)),
    "evening": tuple(range(18, 22)),
    "night": (22, 23, 0, 1, 2, 3, 4, 5),
}
_MINUTES = (0, 15, 30, 45)
_DURATIONS = (30, 45, 60, 90, 120)


class PersonaValidationError(ValueError):
    pass


@dataclass(frozen=True)
class PersonaSpec:
    """Knobs for one synthetic population segment."""

    name: str
    events_per_month_mean: float
    events_per_month_spread: float
    weekend_event_probability: float
    band_weights: tuple[float, float, float, float, float]
    work_pool: tuple[str, ...]
    home_pool: tuple[str, ...]
    modification_probability: float
    months_active: int
    work_share: float = 0.5  # probability a summary draws from work_pool
    timezone: str = "UTC"

    def validate(self) -> None:
        if not self.name:
            raise PersonaValidationError("name: must be non-empty")
        if self.events_per_month_mean <= 0:
            raise PersonaValidationError("events_per_month_mean: must be > 0")
        if self.events_per_month_spread < 0:
            raise PersonaValidationError("events_per_month_spread: must be >= 0")
        for prob_field in (
            "weekend_event_probability",
            "modification_probability",
            "work_share",
        ):
            v = getattr(self, prob_field)
            if not 0.0 <= v <= 1.0:
                raise PersonaValidationError(f"{prob_field}: {v} not in [0,1]")
        if len(self.band_weights) != 5:
            raise PersonaValidationError("band_weights: need 5 entries")
        if any(w < 0 for w in self.band_weights):
            raise PersonaValidationError("band_weights: negative entry")
        if abs(sum(self.band_weights) - 1.0) > 1e-9:
            raise PersonaValidationError("band_weights: must sum to 1")
        if self.months_active < 1:
            raise PersonaValidationError("months_active: must be >= 1")
        if not self.work_pool or not self.home_pool:
            raise PersonaValidationError("work_pool/home_pool: must be non-empty")
        try:
            ZoneInfo(self.timezone)
        except Exception:
            raise PersonaValidationError(f"timezone: unknown zone {self.timezone}")


# Summary template pools are salted with concept-lexicon keywords so
# labeling rates are controllable; a few neutral templates keep an
# unlabeled share and mixed templates produce multi-label events.
_OFFICE_WORK = (
    "team standup",
    "sprint planning with the team",
    "budget review meeting",
    "1:1 with manager",
    "quarterly report deadline",
    "client presentation prep",
    "interview candidate",
    "deploy release window",
    "project kickoff meeting",
    "design review session",
)
_OFFICE_HOME = (
    "dinner with family",
    "gym session",
    "dentist appointment",
    "grocery run",
    "team dinner celebration",
)
_NIGHT_WORK = (
    "deploy maintenance window",
    "on-call rotation",
    "incident review meeting",
    "code review backlog",
    "sprint demo",
)
_NIGHT_HOME = (
    "late movie night",
    "concert with friends",
    "game night",
    "bar trivia with friends",
    "midnight ramen run",
    "band rehearsal",
    "gym then party",
)
_FAMILY_WORK = (
    "parent teacher meeting",
    "school fundraiser planning",
    "shift schedule review",
    "invoice paperwork",
)
_FAMILY_HOME = (
    "soccer practice pickup",
    "family dinner",
    "pediatrician appointment",
    "birthday party",
    "church service",
    "playdate at the park",
    "swim lesson",
    "grandma visit",
    "weekend hiking trip",
)
_NEUTRAL = ("hold", "busy", "tentative", "reminder", "tbd")

DEFAULT_PERSONAS: tuple[PersonaSpec, ...] = (
    PersonaSpec(
        name="office",
        events_per_month_mean=22,
        events_per_month_spread=4,
        weekend_event_probability=0.04,
        band_weights=(0.40, 0.18, 0.32, 0.08, 0.02),
        work_pool=_OFFICE_WORK + _NEUTRAL[:2],
        home_pool=_OFFICE_HOME + _NEUTRAL[2:],
        modification_probability=0.35,
        months_active=6,
        work_share=0.82,
    ),
    PersonaSpec(
        name="night-owl",
        events_per_month_mean=13,
        events_per_month_spread=3,
        weekend_event_probability=0.35,
        band_weights=(0.03, 0.05, 0.12, 0.38, 0.42),
        work_pool=_NIGHT_WORK + _NEUTRAL[:2],
        home_pool=_NIGHT_HOME + _NEUTRAL[2:],
        modification_probability=0.12,
        months_active=6,
        work_share=0.40,
    ),
    PersonaSpec(
        name="family-heavy",
        events_per_month_mean=17,
        events_per_month_spread=4,
        weekend_event_probability=0.48,
        band_weights=(0.16, 0.14, 0.18, 0.42, 0.10),
        work_pool=_FAMILY_WORK + _NEUTRAL[:2],
        home_pool=_FAMILY_HOME + _NEUTRAL[2:],
        modification_probability=0.08,
        months_active=6,
        work_share=0.18,
    ),
)

# first names for the deidentification fixtures; deliberately not
# everyday English words so deleting them never mangles clean summaries
NAME_POOL: tuple[str, ...] = (
    "priya", "carlos", "yuki", "omar", "ingrid", "tomasz", "amara",
    "dmitri", "keiko", "rafael", "svetlana", "kwame", "mei", "henrik",
    "zainab", "paolo", "annika", "tariq", "noor", "stefan",
)


def _month_days(year: int, month: int) -> list[date]:
    d = date(year, month, 1)
    days = []
    while d.month == month:
        days.append(d)
        d += timedelta(days=1)
    return days


def _pick_day(rng: random.Random, year: int, month: int, weekend: bool) -> date:
    days = [
        d for d in _month_days(year, month) if (d.weekday() >= 5) == weekend
    ]
    return rng.choice(days)


def generate_user(
    rng: random.Random, user_id: int, spec: PersonaSpec
) -> list[ScheduleEvent]:
    """All events for one user; caller supplies the shared RNG."""
    tz = ZoneInfo(spec.timezone)
    events: list[ScheduleEvent] = []
    seq = 0
    for month_offset in range(spec.months_active):
        year = _EPOCH.year + (_EPOCH.month - 1 + month_offset) // 12
        month = (_EPOCH.month - 1 + month_offset) % 12 + 1
        count = max(
            1,
            round(rng.normalvariate(spec.events_per_month_mean, spec.events_per_month_spread)),
        )
        for _ in range(count):
            weekend = rng.random() < spec.weekend_event_probability
            day = _pick_day(rng, year, month, weekend)
            band = rng.choices(_BANDS, weights=spec.band_weights)[0]
            hour = rng.choice(_BAND_HOURS[band])
            minute = rng.choice(_MINUTES)
            local_start = datetime(day.year, day.month, day.day, hour, minute, tzinfo=tz)
            start = local_start.astimezone(timezone.utc)
            end = start + timedelta(minutes=rng.choice(_DURATIONS))
            pool = spec.work_pool if rng.random() < spec.work_share else spec.home_pool
            summary = rng.choice(pool)
            created = start - timedelta(
                days=rng.randint(1, 45), minutes=rng.randint(0, 720)
            )
            if rng.random() < spec.modification_probability:
                updated = created + timedelta(minutes=rng.randint(30, 40000))
            else:
                updated = created
            seq += 1
            events.append(
                ScheduleEvent(
                    event_id=f"u{user_id}-e{seq}",
                    user_id=user_id,
                    summary=summary,
                    start=start,
                    end=end,
                    created=created,
                    updated=updated,
                    timezone=spec.timezone,
                    attendee_count=rng.randint(0, 6),
                    is_creator=rng.random() < 0.7,
                )
            )
    return events


def generate_events(
    personas: Sequence[tuple[PersonaSpec, int]], seed: int
) -> tuple[list[ScheduleEvent], dict[int, str]]:
    """In-memory corpus: (events, user_id -> persona name truth map)."""
    events, truth = [], {}
    for batch, uid, user_events in _stream(personas, seed):
        truth[uid] = batch
        events.extend(user_events)
    return events, truth


def _stream(
    personas: Sequence[tuple[PersonaSpec, int]], seed: int
) -> Iterator[tuple[str, int, list[ScheduleEvent]]]:
    if not personas:
        raise PersonaValidationError("personas: need at least one")
    for spec, count in personas:
        spec.validate()
        if count < 1:
            raise PersonaValidationError(f"user count for {spec.name}: must be >= 1")
    rng = random.Random(seed)
    uid = 1
    for spec, count in personas:
        for _ in range(count):
            yield spec.name, uid, generate_user(rng, uid, spec)
            uid += 1


def write_corpus(
    out_dir: str | Path, personas: Sequence[tuple[PersonaSpec, int]], seed: int
) -> dict[str, int]:
    """Stream a corpus to disk: events.log (canonical line format),
    truth.txt (user_id persona per line), names.txt (name lexicon).

    Returns {"users": ..., "events": ...}.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    users = 0
    total = 0
    with open(out / "events.log", "w", encoding="utf-8") as ev_fh, open(
        out / "truth.txt", "w", encoding="utf-8"
    ) as truth_fh:
        for persona_name, uid, user_events in _stream(personas, seed):
            truth_fh.write(f"{uid}\t{persona_name}\n")
            for ev in user_events:
                ev_fh.write(event_to_line(ev) + "\n")
            users += 1
            total += len(user_events)
    (out / "names.txt").write_text(
        "# synthetic first-name lexicon\n" + "\n".join(NAME_POOL) + "\n",
        encoding="utf-8",
    )
    return {"users": users, "events": total}


def default_corpus(
    seed: int = 7, users_per_persona: int = 100
) -> tuple[list[ScheduleEvent], dict[int, str]]:
    """The shipped 3-persona set used across the test suite."""
    return generate_events([(p, users_per_persona) for p in DEFAULT_PERSONAS], seed)


def full_scale_personas(
    users: int = 1025, target_events: int = 1_650_000
) -> list[tuple[PersonaSpec, int]]:
    """Persona mix scaled so ``users`` users produce roughly
    ``target_events`` events (long histories, dense months)."""
    months = 24
    per_month = max(1.0, target_events / users / months)
    counts = [users // 3, users // 3, users - 2 * (users // 3)]
    return [
        (
            PersonaSpec(
                name=spec.name,
                events_per_month_mean=per_month,
                events_per_month_spread=per_month * 0.15,
                weekend_event_probability=spec.weekend_event_probability,
                band_weights=spec.band_weights,
                work_pool=spec.work_pool,
                home_pool=spec.home_pool,
                modification_probability=spec.modification_probability,
                months_active=months,
                work_share=spec.work_share,
                timezone=spec.timezone,
            ),
            count,
        )
        for spec, count in zip(DEFAULT_PERSONAS, counts)
    ]


# --- PII planting (test fixture support) --------------------------------

def _fake_phone(rng: random.Random) -> str:
    styles = (
        lambda: f"+1 {rng.randint(200, 989)} 555 {rng.randint(0, 9999):04d}",
        lambda: f"({rng.randint(200, 989)}) 555-{rng.randint(0, 9999):04d}",
        lambda: f"{rng.randint(200, 989)}-555-{rng.randint(0, 9999):04d}",
        lambda: f"+44 20 {rng.randint(1000, 9999)} {rng.randint(1000, 9999)}",
    )
    return rng.choice(styles)()


def _fake_email(rng: random.Random) -> str:
    name = rng.choice(NAME_POOL)
    return f"{name}.{rng.randint(1, 99)}@example{rng.randint(1, 9)}.com"


_STREETS = ("Maple", "Oak", "Cedar", "Birch", "Juniper", "Willow")
_SUFFIXES = ("Street", "Ave", "Road", "Blvd", "Lane", "Drive", "Court")


def _fake_address(rng: random.Random) -> str:
    return f"{rng.randint(1, 9999)} {rng.choice(_STREETS)} {rng.choice(_SUFFIXES)}"


def _fake_name(rng: random.Random) -> str:
    return rng.choice(NAME_POOL).capitalize()


def plant_pii(
    events: Iterable[ScheduleEvent], seed: int, count: int = 500
) -> tuple[list[ScheduleEvent], list[tuple[str, str]]]:
    """Salt a corpus with synthetic PII for scrubber tests.

    Cycles phone/email/address/name plants over evenly spaced events.
    Returns (mutated events, [(pii_class, planted_text), ...]).
    """
    events = list(events)
    if count > len(events):
        raise ValueError("cannot plant more PII items than events")
    rng = random.Random(seed)
    makers = (
        ("PHONE", _fake_phone),
        ("EMAIL", _fake_email),
        ("ADDR", _fake_address),
        ("NAME", _fake_name),
    )
    step = len(events) // count
    planted: list[tuple[str, str]] = []
    out = list(events)
    for i in range(count):
        idx = i * step
        pii_class, maker = makers[i % len(makers)]
        text = maker(rng)
        ev = out[idx]
        joiner = rng.choice((" with ", " call ", " at ", " rsvp "))
        out[idx] = ev.with_summary(ev.summary + joiner + text)
        planted.append((pii_class, text))
    return out, planted
