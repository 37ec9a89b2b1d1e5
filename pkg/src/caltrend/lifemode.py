"""Work/home life-mode labeling from concept lexicons.

An event carries the Work label iff its tokenized summary shares at
least one keyword with the work concept set, and analogously for Home.
Matching is exact token membership, never substring, so "art" does not
label "party". A keyword present in both sets labels both modes.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .model import LifeMode, ScheduleEvent, UserRecord

__all__ = [
    "ConceptLexicon",
    "LabelStats",
    "EmptyCorpusError",
    "tokenize",
    "label_event",
    "label_store",
    "corpus_stats",
    "load_keyword_file",
    "default_lexicon",
    "stopwords",
]


class EmptyCorpusError(ValueError):
    pass


# Tokens are lowercase alphanumeric runs, optionally joined by : - ' so
# meeting jargon like "1:1", "check-in" and possessives survive intact.
_TOKEN_RE = re.compile(r"[a-z0-9]+(?:[:'\-][a-z0-9]+)*")
_PLACEHOLDER_RE = re.compile(r"\[(?:PHONE|EMAIL|ADDR)-\d+\]", re.IGNORECASE)


def _load_packaged_lines(name: str) -> list[str]:
    text = resources.files("caltrend.data").joinpath(name).read_text("utf-8")
    return _keyword_lines(text)


def _keyword_lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        out.append(line.lower())
    return out


def load_keyword_file(path: str | Path) -> frozenset[str]:
    """Load a keyword set: UTF-8, one lowercase token per line, # comments."""
    return frozenset(_keyword_lines(Path(path).read_text("utf-8")))


_STOPWORDS: frozenset[str] | None = None


def stopwords() -> frozenset[str]:
    global _STOPWORDS
    if _STOPWORDS is None:
        _STOPWORDS = frozenset(_load_packaged_lines("stopwords.txt"))
    return _STOPWORDS


def tokenize(summary: str) -> list[str]:
    """Lowercase, punctuation-stripped, stop-word-filtered tokens.

    Redaction placeholders ([PHONE-1], [EMAIL-2], [ADDR-3]) are dropped
    before tokenization; tokens containing digits are kept. Order is the
    order of appearance in the summary.
    """
    text = _PLACEHOLDER_RE.sub(" ", summary).lower()
    stops = stopwords()
    return [t for t in _TOKEN_RE.findall(text) if t not in stops]


@dataclass(frozen=True)
class ConceptLexicon:
    """The work and home keyword concept sets driving labeling."""

    work: frozenset[str]
    home: frozenset[str]

    def __post_init__(self) -> None:
        for name, kws in (("work", self.work), ("home", self.home)):
            for kw in kws:
                if any(c.isspace() for c in kw):
                    raise ValueError(f"{name} keyword contains whitespace: {kw!r}")

    def require_nonempty(self) -> None:
        if not self.work or not self.home:
            raise ValueError("concept lexicon sets must be non-empty at labeling time")


_DEFAULT: ConceptLexicon | None = None


def default_lexicon() -> ConceptLexicon:
    """The lexicon shipped with the package (work: office/technology/finance;
    home: social/private life). Analysts swap in their own via files."""
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = ConceptLexicon(
            work=frozenset(_load_packaged_lines("work_lexicon.txt")),
            home=frozenset(_load_packaged_lines("home_lexicon.txt")),
        )
    return _DEFAULT


def label_event(event: ScheduleEvent, lexicon: ConceptLexicon) -> frozenset[LifeMode]:
    """Pure function of (summary, lexicon); may return zero, one or both modes."""
    lexicon.require_nonempty()
    tokens = set(tokenize(event.summary))
    labels = set()
    if tokens & lexicon.work:
        labels.add(LifeMode.WORK)
    if tokens & lexicon.home:
        labels.add(LifeMode.HOME)
    return frozenset(labels)


def label_store(
    store: dict[int, UserRecord], lexicon: ConceptLexicon
) -> dict[int, UserRecord]:
    """Return a new store whose events carry life-mode labels."""
    lexicon.require_nonempty()
    out: dict[int, UserRecord] = {}
    for user_id, record in store.items():
        events = [e.with_labels(label_event(e, lexicon)) for e in record.events]
        out[user_id] = UserRecord(user_id, events, record.active_months)
    return out


@dataclass(frozen=True)
class LabelStats:
    """Corpus labeling bookkeeping.

    Identity: labeled = work_labeled + home_labeled - multi_labeled,
    exactly, on every corpus. All fractions are over ``total``.
    """

    total: int
    labeled: int
    work_labeled: int
    home_labeled: int
    multi_labeled: int

    def __post_init__(self) -> None:
        if self.labeled != self.work_labeled + self.home_labeled - self.multi_labeled:
            raise ValueError("label counts violate inclusion-exclusion")
        if self.multi_labeled > min(self.work_labeled, self.home_labeled):
            raise ValueError("multi_labeled exceeds a single-mode count")
        if self.labeled > self.total:
            raise ValueError("labeled exceeds total")

    @property
    def labeled_fraction(self) -> float:
        return self.labeled / self.total if self.total else 0.0

    @property
    def work_fraction(self) -> float:
        return self.work_labeled / self.total if self.total else 0.0

    @property
    def home_fraction(self) -> float:
        return self.home_labeled / self.total if self.total else 0.0

    @property
    def multi_fraction(self) -> float:
        return self.multi_labeled / self.total if self.total else 0.0


def corpus_stats(store: dict[int, UserRecord]) -> LabelStats:
    """Count labeled events across the store (labeling already applied)."""
    total = labeled = work = home = multi = 0
    for record in store.values():
        for ev in record.events:
            total += 1
            w = LifeMode.WORK in ev.labels
            h = LifeMode.HOME in ev.labels
            if w or h:
                labeled += 1
            if w:
                work += 1
            if h:
                home += 1
            if w and h:
                multi += 1
    if total == 0:
        raise EmptyCorpusError("empty corpus")
    return LabelStats(total, labeled, work, home, multi)


def mode_counter(events: list[ScheduleEvent]) -> Counter:
    """Work/home/multi/unlabeled counts for one event list."""
    c: Counter = Counter()
    for ev in events:
        w = LifeMode.WORK in ev.labels
        h = LifeMode.HOME in ev.labels
        if w:
            c["work"] += 1
        if h:
            c["home"] += 1
        if w and h:
            c["multi"] += 1
        if not (w or h):
            c["unlabeled"] += 1
    return c
