"""Schedule-log parsing and PII deidentification.

Canonical interchange format (one event per line, UTF-8 JSON, keys in
exactly this order)::

    {"event_id": str, "user_id": int, "summary": str,
     "start": ISO-8601 UTC, "end": ISO-8601 UTC,
     "created": ISO-8601 UTC, "updated": ISO-8601 UTC,
     "timezone": IANA name, "attendees": int, "is_creator": bool,
     "labels": sorted list of "Work"/"Home"}

Timestamps are serialized in UTC with an explicit +00:00 offset; inputs
may carry any offset (or a trailing Z). ``labels`` is optional on input
and always written on output, so serialize(parse(...)) is a fixed point.

Deidentification replaces phone numbers, emails and street addresses
with class-scoped numbered placeholders ([PHONE-1], [EMAIL-1],
[ADDR-1]) and deletes tokens found in a supplied name lexicon. The
redaction map stores salted hashes only, never raw PII.
"""

from __future__ import annotations

import hashlib
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Iterable, Iterator
from zoneinfo import ZoneInfo

from .model import NO_LABELS, LifeMode, ScheduleEvent

__all__ = [
    "ParseReport",
    "RedactionMap",
    "Redactor",
    "NameLexicon",
    "EmptyCorpusError",
    "parse_log",
    "parse_file",
    "event_to_line",
    "write_events",
    "scan_pii",
    "load_name_lexicon",
    "PII_PATTERNS",
]


class EmptyCorpusError(ValueError):
    pass


_FIELDS = (
    "event_id",
    "user_id",
    "summary",
    "start",
    "end",
    "created",
    "updated",
    "timezone",
    "attendees",
    "is_creator",
)

_LABEL_NAMES = {m.value: m for m in LifeMode}


@dataclass
class ParseReport:
    """Per-run parsing bookkeeping. parsed + rejected = total_lines
    (blank lines excluded)."""

    total_lines: int = 0
    parsed: int = 0
    rejected: int = 0
    rejection_reasons: Counter = field(default_factory=Counter)

    def reject(self, reason: str) -> None:
        self.rejected += 1
        self.rejection_reasons[reason] += 1


def _parse_ts(value: str) -> datetime:
    # Accept a trailing Z (fromisoformat only learns it in 3.11).
    if value.endswith(("Z", "z")):
        value = value[:-1] + "+00:00"
    dt = datetime.fromisoformat(value)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def _parse_line(line: str) -> ScheduleEvent:
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise _Rejection("bad-json") from exc
    if not isinstance(raw, dict):
        raise _Rejection("bad-json")
    for name in _FIELDS:
        if name not in raw:
            raise _Rejection("missing-field")
    if (
        not isinstance(raw["event_id"], str)
        or not isinstance(raw["user_id"], int)
        or isinstance(raw["user_id"], bool)
        or not isinstance(raw["summary"], str)
        or not isinstance(raw["timezone"], str)
        or not isinstance(raw["attendees"], int)
        or isinstance(raw["attendees"], bool)
        or not isinstance(raw["is_creator"], bool)
    ):
        raise _Rejection("bad-type")
    try:
        start = _parse_ts(raw["start"])
        end = _parse_ts(raw["end"])
        created = _parse_ts(raw["created"])
        updated = _parse_ts(raw["updated"])
    except (ValueError, TypeError) as exc:
        raise _Rejection("bad-timestamp") from exc
    try:
        ZoneInfo(raw["timezone"])
    except Exception as exc:
        raise _Rejection("bad-timezone") from exc
    labels = NO_LABELS
    if "labels" in raw:
        if not isinstance(raw["labels"], list) or any(
            l not in _LABEL_NAMES for l in raw["labels"]
        ):
            raise _Rejection("bad-labels")
        if raw["labels"]:
            labels = frozenset(_LABEL_NAMES[l] for l in raw["labels"])
    try:
        return ScheduleEvent(
            event_id=raw["event_id"],
            user_id=raw["user_id"],
            summary=raw["summary"],
            start=start,
            end=end,
            created=created,
            updated=updated,
            timezone=raw["timezone"],
            attendee_count=raw["attendees"],
            is_creator=raw["is_creator"],
            labels=labels,
        )
    except ValueError as exc:
        raise _Rejection("invariant-violation") from exc


class _Rejection(Exception):
    def __init__(self, reason: str):
        self.reason = reason


def parse_log(lines: Iterable[str]) -> tuple[list[ScheduleEvent], ParseReport]:
    """Parse line-delimited event records.

    Malformed lines are counted in the report, never fatal. Raises
    :class:`EmptyCorpusError` when zero lines parse.
    """
    events: list[ScheduleEvent] = []
    report = ParseReport()
    for line in lines:
        stripped = line.strip()
        if not stripped:
            continue
        report.total_lines += 1
        try:
            events.append(_parse_line(stripped))
            report.parsed += 1
        except _Rejection as rej:
            report.reject(rej.reason)
    if report.parsed == 0:
        raise EmptyCorpusError("empty corpus: no parsable lines")
    return events, report


def parse_file(path: str | Path) -> tuple[list[ScheduleEvent], ParseReport]:
    with open(path, encoding="utf-8") as fh:
        return parse_log(fh)


def _ts(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).isoformat()


def event_to_line(event: ScheduleEvent) -> str:
    """Canonical single-line serialization (fixed key order, compact)."""
    record = {
        "event_id": event.event_id,
        "user_id": event.user_id,
        "summary": event.summary,
        "start": _ts(event.start),
        "end": _ts(event.end),
        "created": _ts(event.created),
        "updated": _ts(event.updated),
        "timezone": event.timezone,
        "attendees": event.attendee_count,
        "is_creator": event.is_creator,
        "labels": sorted(m.value for m in event.labels),
    }
    return json.dumps(record, separators=(",", ":"), ensure_ascii=False)


def write_events(target: str | Path | IO[str], events: Iterable[ScheduleEvent]) -> None:
    if hasattr(target, "write"):
        fh = target
        for ev in events:
            fh.write(event_to_line(ev) + "\n")
    else:
        with open(target, "w", encoding="utf-8") as fh:
            for ev in events:
                fh.write(event_to_line(ev) + "\n")


# --- deidentification ---------------------------------------------------

# Precision is favored over recall: each pattern targets a specific
# written shape rather than any digit run.
PII_PATTERNS: dict[str, re.Pattern[str]] = {
    # +1 415 555 0134 / +44-20-5555-0134 / international with 7+ digits
    # and NA shapes 555-123-4567, (555) 123-4567, 555.123.4567
    "PHONE": re.compile(
        r"""
        (?<![\w.+-])
        (?:
            \+\d{1,3}[\s.-]?\(?\d{1,4}\)?(?:[\s.-]?\d{2,4}){2,4}
          | \(?\d{3}\)?[\s.-]\d{3}[\s.-]\d{4}
        )
        (?![\w-])
        """,
        re.VERBOSE,
    ),
    "EMAIL": re.compile(r"[A-Za-z0-9._%+\-]+@[A-Za-z0-9.\-]+\.[A-Za-z]{2,}"),
    # house number + capitalizable street word: 123 Maple Street, 9 W 5th Ave.
    "ADDR": re.compile(
        r"""
        \b\d{1,5}\s+(?:[A-Za-z0-9'.]+\s+){0,3}?
        (?:Street|St|Avenue|Ave|Road|Rd|Boulevard|Blvd|Lane|Ln|Drive|Dr|
           Court|Ct|Way|Place|Pl|Terrace|Ter|Circle|Cir|Square|Sq|Parkway|Pkwy)
        \.?(?!\w)
        """,
        re.VERBOSE | re.IGNORECASE,
    ),
}

# Scan order matters: an email must be consumed before the phone pass can
# chew on the digits inside it.
_SCAN_ORDER = ("EMAIL", "PHONE", "ADDR")

_WS_RE = re.compile(r"\s+")


@dataclass
class RedactionMap:
    """Ordered (salted span hash, placeholder) pairs plus per-class counters.

    Raw PII never enters this structure; originals are hashed with the
    owning :class:`Redactor`'s salt before being recorded.
    """

    pairs: list[tuple[str, str]] = field(default_factory=list)
    class_counts: Counter = field(default_factory=Counter)
    names_removed: int = 0


class NameLexicon:
    """Set of lowercase name tokens to delete from summaries."""

    def __init__(self, names: Iterable[str] = ()):
        self.names = frozenset(n.strip().lower() for n in names if n.strip())
        self._pattern = (
            re.compile(
                r"\b(?:" + "|".join(re.escape(n) for n in sorted(self.names)) + r")\b",
                re.IGNORECASE,
            )
            if self.names
            else None
        )

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, token: str) -> bool:
        return token.lower() in self.names

    def strip(self, text: str) -> tuple[str, int]:
        """Delete all lexicon names; returns (text, count removed)."""
        if self._pattern is None:
            return text, 0
        out, n = self._pattern.subn("", text)
        if n:
            out = _WS_RE.sub(" ", out).strip()
        return out, n


def load_name_lexicon(path: str | Path) -> NameLexicon:
    """Name lexicon file: UTF-8, one lowercase token per line, # comments."""
    names = []
    for raw in Path(path).read_text("utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        names.append(line)
    return NameLexicon(names)


class Redactor:
    """Stateful deidentifier: stable placeholders within one run.

    The same PII string always maps to the same placeholder (dedup is
    done on the salted hash, so originals are never retained).
    Deidentification is pure per event; one Redactor is meant to be
    applied sequentially over a corpus.
    """

    def __init__(self, names: NameLexicon | None = None, salt: bytes | None = None):
        self.names = names or NameLexicon()
        self.salt = salt if salt is not None else b"caltrend"
        self.map = RedactionMap()
        self._assigned: dict[str, str] = {}  # span hash -> placeholder

    def _hash(self, original: str) -> str:
        return hashlib.sha256(self.salt + original.encode("utf-8")).hexdigest()

    def _placeholder(self, pii_class: str, original: str) -> str:
        key = self._hash(original)
        token = self._assigned.get(key)
        if token is None:
            self.map.class_counts[pii_class] += 1
            token = f"[{pii_class}-{self.map.class_counts[pii_class]}]"
            self._assigned[key] = token
            self.map.pairs.append((key, token))
        return token

    def deidentify_text(self, text: str) -> str:
        # Iterate to a fixed point: deleting a name collapses whitespace,
        # which can reassemble a matchable phone/address shape around the
        # gap. Placeholders are inert to every pattern, so this terminates.
        while True:
            before = text
            for pii_class in _SCAN_ORDER:
                pattern = PII_PATTERNS[pii_class]
                text = pattern.sub(
                    lambda m, c=pii_class: self._placeholder(c, m.group(0)), text
                )
            text, removed = self.names.strip(text)
            self.map.names_removed += removed
            if text == before:
                return text

    def deidentify(self, event: ScheduleEvent) -> ScheduleEvent:
        return event.with_summary(self.deidentify_text(event.summary))

    def deidentify_all(self, events: list[ScheduleEvent]) -> list[ScheduleEvent]:
        return [self.deidentify(e) for e in events]


def scan_pii(text: str, names: NameLexicon | None = None) -> list[tuple[str, str]]:
    """Detector pass used to verify deidentified output: returns every
    (class, match) found, including name-lexicon hits."""
    found = [
        (pii_class, m.group(0))
        for pii_class in _SCAN_ORDER
        for m in PII_PATTERNS[pii_class].finditer(text)
    ]
    if names is not None and len(names):
        for m in re.finditer(r"[\w'@.+-]+", text):
            if m.group(0) in names:
                found.append(("NAME", m.group(0)))
    return found
