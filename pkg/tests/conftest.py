from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

import pytest

from caltrend.lifemode import default_lexicon, label_store
from caltrend.model import ScheduleEvent, build_store
from caltrend.synth import default_corpus

UTC = timezone.utc


def make_event(
    event_id: str = "e1",
    user_id: int = 1,
    summary: str = "team meeting",
    start: datetime | None = None,
    duration_minutes: int = 60,
    modified: bool = False,
    tz: str = "UTC",
    **kw,
) -> ScheduleEvent:
    """Terse event factory; ``start`` may be naive (treated as UTC)."""
    if start is None:
        start = datetime(2024, 3, 5, 9, 0, tzinfo=UTC)  # a Tuesday
    elif start.tzinfo is None:
        start = start.replace(tzinfo=UTC)
    created = start - timedelta(days=3)
    updated = created + timedelta(hours=4) if modified else created
    return ScheduleEvent(
        event_id=event_id,
        user_id=user_id,
        summary=summary,
        start=start,
        end=start + timedelta(minutes=duration_minutes),
        created=created,
        updated=updated,
        timezone=tz,
        **kw,
    )


BLOCK_A = ("alpha", "bravo")
BLOCK_B = ("charlie", "delta")


def two_block_docs(seed: int, docs_per_block: int = 10, doc_len: int = 6):
    """Corpus whose documents draw exclusively from one of two
    disjoint two-word vocabularies."""
    rng = random.Random(seed)
    docs = []
    for _ in range(docs_per_block):
        docs.append([rng.choice(BLOCK_A) for _ in range(doc_len)])
        docs.append([rng.choice(BLOCK_B) for _ in range(doc_len)])
    return docs


@pytest.fixture
def event_factory():
    return make_event


@pytest.fixture(scope="session")
def small_corpus():
    """30 synthetic users (10 per persona), deterministic."""
    return default_corpus(seed=11, users_per_persona=10)


@pytest.fixture(scope="session")
def labeled_store(small_corpus):
    events, _ = small_corpus
    return label_store(build_store(events), default_lexicon())


@pytest.fixture(scope="session")
def dataset_dir(tmp_path_factory, labeled_store):
    from caltrend.ingestion import write_events

    root = tmp_path_factory.mktemp("dataset")
    events = [e for uid in sorted(labeled_store) for e in labeled_store[uid].events]
    write_events(root / "events.log", events)
    return root


@pytest.fixture(scope="session")
def dataset(dataset_dir):
    from caltrend.server import Dataset

    return Dataset.load(dataset_dir)


@pytest.fixture()
def client(dataset):
    from fastapi.testclient import TestClient

    from caltrend.server import create_app

    app = create_app(dataset=dataset)
    with TestClient(app) as c:
        yield c
