"""Per-life-mode topic models over event summaries and word-cloud
payloads, including the contrastive diff view.

The model is latent Dirichlet allocation fit by collapsed Gibbs
sampling, written out longhand. Corpora here are tiny (one document per
event summary for a user selection), so the sampler favors clarity and
determinism over vectorization; fitting is seconds even at thousands of
tokens.

A selection is served by four fitted models: a work and a home display
model behind the two word clouds, and a work/home baseline pair whose
aggregated counts feed the diff scoring. Count conservation makes the
baseline-model route identical to scoring raw corpus counts, which is
what the tests pin down.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .lifemode import tokenize
from .model import LifeMode, UserRecord

__all__ = [
    "TopicModel",
    "WordcloudPayload",
    "EmptyTopicCorpusError",
    "fit",
    "top_keywords",
    "diff_scores",
    "diff_keywords",
    "mode_keyword_counts",
    "TopicService",
]


class EmptyTopicCorpusError(ValueError):
    pass


@dataclass
class TopicModel:
    vocabulary: tuple[str, ...]
    topic_word_counts: list[list[int]]  # K x V
    doc_topic_counts: list[list[int]]  # D x K
    topic_totals: list[int]  # K, tokens per topic
    alpha: float
    beta: float
    k: int
    seed: int
    iterations: int
    warnings: list[str] = field(default_factory=list)

    @property
    def total_tokens(self) -> int:
        return sum(self.topic_totals)


SweepHook = Callable[[int, list[list[int]]], None]


def fit(
    docs: Sequence[Sequence[str]],
    k: int = 5,
    iterations: int = 200,
    seed: int = 0,
    alpha: float = 0.1,
    beta: float = 0.01,
    on_sweep: SweepHook | None = None,
) -> TopicModel:
    """Collapsed Gibbs LDA over pre-tokenized documents.

    Deterministic given seed. K is reduced (with a warning) when the
    vocabulary is smaller than K. ``on_sweep(sweep, topic_word_counts)``
    fires after every full sweep so tests can check count conservation
    mid-run.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    vocabulary = tuple(sorted({w for doc in docs for w in doc}))
    if not vocabulary:
        raise EmptyTopicCorpusError("empty corpus: no tokens in any document")
    vocab_index = {w: i for i, w in enumerate(vocabulary)}
    v = len(vocabulary)
    warnings = []
    if v < k:
        warnings.append(f"K reduced from {k} to {v}: vocabulary has {v} keywords")
        k = v

    word_ids = [[vocab_index[w] for w in doc] for doc in docs]
    d_count = len(docs)

    rng = random.Random(seed)
    nkv = [[0] * v for _ in range(k)]
    ndk = [[0] * k for _ in range(d_count)]
    nk = [0] * k
    assignments = []
    for d, ids in enumerate(word_ids):
        z_doc = []
        for w in ids:
            z = rng.randrange(k)
            z_doc.append(z)
            nkv[z][w] += 1
            ndk[d][z] += 1
            nk[z] += 1
        assignments.append(z_doc)

    v_beta = v * beta
    for sweep in range(iterations):
        for d, ids in enumerate(word_ids):
            z_doc = assignments[d]
            row = ndk[d]
            for pos, w in enumerate(ids):
                z = z_doc[pos]
                nkv[z][w] -= 1
                row[z] -= 1
                nk[z] -= 1
                # p(z=t) ∝ (n_dt + α)(n_tw + β)/(n_t + Vβ)
                total = 0.0
                weights = []
                for t in range(k):
                    p = (row[t] + alpha) * (nkv[t][w] + beta) / (nk[t] + v_beta)
                    total += p
                    weights.append(total)
                r = rng.random() * total
                z = 0
                while weights[z] < r:
                    z += 1
                z_doc[pos] = z
                nkv[z][w] += 1
                row[z] += 1
                nk[z] += 1
        if on_sweep is not None:
            on_sweep(sweep, nkv)

    return TopicModel(
        vocabulary=vocabulary,
        topic_word_counts=nkv,
        doc_topic_counts=ndk,
        topic_totals=nk,
        alpha=alpha,
        beta=beta,
        k=k,
        seed=seed,
        iterations=iterations,
        warnings=warnings,
    )


@dataclass(frozen=True)
class WordcloudPayload:
    """Ranked (keyword, weight) entries for one cloud.

    Weights are in (0, 1], non-increasing, max normalized to 1 (the UI
    maps weight to font size).
    """

    mode: str  # "work" | "home"
    entries: tuple[tuple[str, float], ...]
    diff: bool = False

    def __post_init__(self) -> None:
        if self.entries:
            weights = [w for _, w in self.entries]
            if abs(weights[0] - 1.0) > 1e-12:
                raise ValueError("max weight must be 1")
            if any(w <= 0 or w > 1 for w in weights):
                raise ValueError("weights must be in (0,1]")
            if any(weights[i] < weights[i + 1] for i in range(len(weights) - 1)):
                raise ValueError("weights must be non-increasing")


def _ranked_entries(scores: Mapping[str, float], n: int) -> tuple[tuple[str, float], ...]:
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))[:n]
    if not ranked:
        return ()
    top = ranked[0][1]
    return tuple((w, s / top) for w, s in ranked)


def top_keywords(model: TopicModel, n: int = 10) -> tuple[tuple[str, float], ...]:
    """Keywords ranked by aggregate topic-weighted probability
    Σ_k π_k φ_kv, ties lexicographic, weights normalized to max 1."""
    total = model.total_tokens
    if total == 0:
        return ()
    v = len(model.vocabulary)
    scores = {}
    for vi, word in enumerate(model.vocabulary):
        s = 0.0
        for t in range(model.k):
            pi = model.topic_totals[t] / total
            phi = (model.topic_word_counts[t][vi] + model.beta) / (
                model.topic_totals[t] + v * model.beta
            )
            s += pi * phi
        scores[word] = s
    return _ranked_entries(scores, n)


def diff_scores(
    a_counts: Mapping[str, int], b_counts: Mapping[str, int], epsilon: float = 0.5
) -> dict[str, float]:
    """Smoothed log-odds score per keyword; positive favors side a.

    δ_w = log((c_a + ε)/(N_a − c_a + ε)) − log((c_b + ε)/(N_b − c_b + ε)).
    Exactly antisymmetric under swapping sides.
    """
    n_a = sum(a_counts.values())
    n_b = sum(b_counts.values())
    scores = {}
    for w in set(a_counts) | set(b_counts):
        c_a = a_counts.get(w, 0)
        c_b = b_counts.get(w, 0)
        scores[w] = math.log((c_a + epsilon) / (n_a - c_a + epsilon)) - math.log(
            (c_b + epsilon) / (n_b - c_b + epsilon)
        )
    return scores


def diff_keywords(
    work_counts: Mapping[str, int], home_counts: Mapping[str, int], n: int = 10
) -> tuple[WordcloudPayload, WordcloudPayload]:
    """Contrastive clouds: top n positive-score keywords per side.

    When one side has no tokens its payload is empty and the other side
    is ranked by its raw smoothed odds (weights via exp so they stay in
    (0,1] even for negative log-odds).
    """
    work_empty = sum(work_counts.values()) == 0
    home_empty = sum(home_counts.values()) == 0
    if work_empty and home_empty:
        return (
            WordcloudPayload("work", (), diff=True),
            WordcloudPayload("home", (), diff=True),
        )
    scores = diff_scores(work_counts, home_counts)
    if work_empty or home_empty:
        side, counts = ("home", home_counts) if work_empty else ("work", work_counts)
        sided = {w: s if side == "work" else -s for w, s in scores.items() if w in counts}
        ranked = sorted(sided.items(), key=lambda kv: (-kv[1], kv[0]))[:n]
        top = ranked[0][1]
        entries = tuple((w, math.exp(s - top)) for w, s in ranked)
        empty = WordcloudPayload("work" if work_empty else "home", (), diff=True)
        full = WordcloudPayload(side, entries, diff=True)
        return (empty, full) if work_empty else (full, empty)
    work_side = {w: s for w, s in scores.items() if s > 0}
    home_side = {w: -s for w, s in scores.items() if s < 0}
    return (
        WordcloudPayload("work", _ranked_entries(work_side, n), diff=True),
        WordcloudPayload("home", _ranked_entries(home_side, n), diff=True),
    )


def mode_keyword_counts(
    records: Iterable[UserRecord], mode: LifeMode
) -> Counter:
    """Token counts over events carrying the given label."""
    counts: Counter = Counter()
    for record in records:
        for ev in record.events:
            if mode in ev.labels:
                counts.update(tokenize(ev.summary))
    return counts


_MODE_NAME = {LifeMode.WORK: "work", LifeMode.HOME: "home"}


class TopicService:
    """Caching facade over fit/top_keywords/diff for a loaded store.

    Per selection it maintains the four models described in the module
    docstring: per-user display models aggregated into each cloud, and
    per-selection baseline models backing the diff view.
    """

    def __init__(
        self,
        store: dict[int, UserRecord],
        k: int = 5,
        iterations: int = 200,
        base_seed: int = 0,
    ):
        self.store = store
        self.k = k
        self.iterations = iterations
        self.base_seed = base_seed
        self._user_models: dict[tuple[int, LifeMode], TopicModel | None] = {}
        self._baseline_models: dict[tuple[frozenset[int], LifeMode], TopicModel | None] = {}

    def _child_seed(self, *parts: int) -> int:
        s = self.base_seed & 0xFFFFFFFF
        for p in parts:
            s = (s * 2654435761 + p + 1) & 0xFFFFFFFF
        return s

    def _mode_docs(self, user_ids: Iterable[int], mode: LifeMode) -> list[list[str]]:
        docs = []
        for uid in sorted(set(user_ids)):
            record = self.store.get(uid)
            if record is None:
                raise KeyError(f"unknown user {uid}")
            for ev in record.events:
                if mode in ev.labels:
                    tokens = tokenize(ev.summary)
                    if tokens:
                        docs.append(tokens)
        return docs

    def user_model(self, uid: int, mode: LifeMode) -> TopicModel | None:
        key = (uid, mode)
        if key not in self._user_models:
            docs = self._mode_docs([uid], mode)
            self._user_models[key] = (
                fit(
                    docs,
                    k=self.k,
                    iterations=self.iterations,
                    seed=self._child_seed(uid, 0 if mode is LifeMode.WORK else 1),
                )
                if docs
                else None
            )
        return self._user_models[key]

    def baseline_model(
        self, user_ids: Iterable[int], mode: LifeMode
    ) -> TopicModel | None:
        key = (frozenset(user_ids), LifeMode(mode))
        if key not in self._baseline_models:
            docs = self._mode_docs(key[0], mode)
            self._baseline_models[key] = (
                fit(
                    docs,
                    k=self.k,
                    iterations=self.iterations,
                    seed=self._child_seed(
                        len(key[0]), 2 if mode is LifeMode.WORK else 3
                    ),
                )
                if docs
                else None
            )
        return self._baseline_models[key]

    def aggregate_selection(
        self, user_ids: Iterable[int], mode: LifeMode, n: int = 10
    ) -> WordcloudPayload:
        """Merge selected users' top-keyword lists by summed weight."""
        merged: Counter = Counter()
        for uid in sorted(set(user_ids)):
            model = self.user_model(uid, mode)
            if model is None:
                continue
            for word, weight in top_keywords(model, n):
                merged[word] += weight
        return WordcloudPayload(_MODE_NAME[mode], _ranked_entries(merged, n))

    def model_counts(self, model: TopicModel | None) -> Counter:
        """Corpus keyword counts recovered from a fitted model's
        topic_word_counts (equal by count conservation)."""
        if model is None:
            return Counter()
        counts: Counter = Counter()
        for vi, word in enumerate(model.vocabulary):
            total = sum(model.topic_word_counts[t][vi] for t in range(model.k))
            if total:
                counts[word] = total
        return counts

    def diff_selection(
        self, user_ids: Iterable[int], n: int = 10
    ) -> tuple[WordcloudPayload, WordcloudPayload]:
        work = self.model_counts(self.baseline_model(user_ids, LifeMode.WORK))
        home = self.model_counts(self.baseline_model(user_ids, LifeMode.HOME))
        return diff_keywords(work, home, n)
