"""Canonical response payloads.

Every API response body is built here and nowhere else, so a direct
library call and an HTTP round-trip produce byte-identical output. Key
order is fixed by construction (insertion order), floats use Python's
shortest-repr encoding, and no timestamps of the serving moment are
ever included.
"""

from __future__ import annotations

import json
from datetime import date, timezone
from typing import Iterable, Mapping, Sequence

import numpy as np

from .features import FEATURE_NAMES, FeatureMatrix
from .model import LifeMode, UserRecord
from .projection import ProjectionResult
from .temporal import (
    DayGridCell,
    GlyphSummary,
    KeywordDistribution,
    WeeklyHeatmap,
    cell_keywords,
    glyph_summary,
    heatmap_diff,
    inline_keyword_limit,
    N_SEGMENTS,
    N_WEEKDAYS,
)
from .topics import WordcloudPayload

__all__ = [
    "canonical_json",
    "mode_name",
    "error_payload",
    "users_payload",
    "user_payload",
    "features_payload",
    "glyph_payload",
    "daygrid_payload",
    "heatmap_payload",
    "topics_payload",
    "keyword_distribution_payload",
    "scatter_payload",
    "projection_started_payload",
    "progress_message",
    "result_message",
    "superseded_message",
    "failure_message",
]


def canonical_json(obj) -> bytes:
    """The one serialization used for every response and push message."""
    return json.dumps(
        obj, separators=(",", ":"), ensure_ascii=False, allow_nan=False
    ).encode("utf-8")


def mode_name(mode: LifeMode | None) -> str:
    if mode is None:
        return "all"
    return "work" if mode is LifeMode.WORK else "home"


def error_payload(message: str) -> dict:
    return {"error": message}


def _glyph_dict(g: GlyphSummary) -> dict:
    return {
        "user_id": g.user_id,
        "total_events": g.total_events,
        "work_fraction": g.work_fraction,
        "home_fraction": g.home_fraction,
        "unlabeled_fraction": g.unlabeled_fraction,
        "hourly_counts": list(g.hourly_counts),
    }


def users_payload(store: Mapping[int, UserRecord]) -> dict:
    return {
        "users": [_glyph_dict(glyph_summary(store[uid])) for uid in sorted(store)]
    }


def user_payload(record: UserRecord) -> dict:
    first = min(ev.start for ev in record.events)
    last = max(ev.end for ev in record.events)
    return {
        "user_id": record.user_id,
        "event_count": len(record.events),
        "active_months": record.active_months,
        "first_event": first.astimezone(timezone.utc).isoformat(),
        "last_event": last.astimezone(timezone.utc).isoformat(),
        "glyph": _glyph_dict(glyph_summary(record)),
    }


def features_payload(
    raw: FeatureMatrix, standardized: FeatureMatrix, user_id: int
) -> dict:
    idx = raw.user_ids.index(user_id)
    return {
        "user_id": user_id,
        "features": [
            {
                "name": name,
                "value": float(raw.values[idx, j]),
                "z": float(standardized.values[idx, j]),
            }
            for j, name in enumerate(FEATURE_NAMES)
        ],
    }


def glyph_payload(record: UserRecord) -> dict:
    return _glyph_dict(glyph_summary(record))


def daygrid_payload(
    user_id: int,
    cells: Sequence[DayGridCell],
    window_start: date,
    window_end: date,
    highlight: str | None,
) -> dict:
    return {
        "user_id": user_id,
        "from": window_start.isoformat(),
        "to": window_end.isoformat(),
        "highlight": highlight,
        "cells": [
            {
                "day": c.day.isoformat(),
                "start_hour": c.start_hour,
                "end_hour": c.end_hour,
                "event_id": c.event_id,
                "labels": sorted(m.value for m in c.labels),
            }
            for c in cells
        ],
    }


def _cells_dict(heatmap: WeeklyHeatmap) -> list[list[dict]]:
    out = []
    for w in range(N_WEEKDAYS):
        row = []
        for s in range(N_SEGMENTS):
            count = heatmap.counts[w][s]
            row.append(
                {
                    "count": count,
                    "keywords": [[kw, c] for kw, c in cell_keywords(heatmap, w, s)],
                    "inline_limit": inline_keyword_limit(count),
                }
            )
        out.append(row)
    return out


def heatmap_payload(
    heatmap: WeeklyHeatmap,
    user_ids: Sequence[int],
    diff_against: WeeklyHeatmap | None = None,
) -> dict:
    payload = {
        "users": list(user_ids),
        "mode": mode_name(heatmap.mode),
        "counts": [list(row) for row in heatmap.counts],
        "row_marginals": heatmap.row_marginals,
        "col_marginals": heatmap.col_marginals,
        "cells": _cells_dict(heatmap),
        "diff": None,
    }
    if diff_against is not None:
        payload["diff"] = {
            "against": mode_name(diff_against.mode),
            "grid": heatmap_diff(heatmap, diff_against),
        }
    return payload


def _cloud_dict(cloud: WordcloudPayload) -> dict:
    return {
        "mode": cloud.mode,
        "diff": cloud.diff,
        "entries": [[kw, weight] for kw, weight in cloud.entries],
    }


def topics_payload(
    user_ids: Sequence[int], work: WordcloudPayload, home: WordcloudPayload, diff: bool
) -> dict:
    return {
        "users": list(user_ids),
        "diff": diff,
        "work": _cloud_dict(work),
        "home": _cloud_dict(home),
    }


def keyword_distribution_payload(
    user_ids: Sequence[int], dist: KeywordDistribution
) -> dict:
    return {
        "users": list(user_ids),
        "keyword": dist.keyword,
        "total": dist.total,
        "weekday_counts": list(dist.weekday_counts),
        "segment_counts": list(dist.segment_counts),
    }


def scatter_payload(
    raw: FeatureMatrix, coords: np.ndarray, x_index: int, y_index: int
) -> dict:
    return {
        "x": FEATURE_NAMES[x_index],
        "y": FEATURE_NAMES[y_index],
        "x_index": x_index,
        "y_index": y_index,
        "points": [
            [uid, float(coords[i, 0]), float(coords[i, 1])]
            for i, uid in enumerate(raw.user_ids)
        ],
    }


def projection_started_payload(job_id: str, session: str) -> dict:
    return {"job_id": job_id, "session": session, "status": "started"}


# --- push-channel messages ----------------------------------------------

def progress_message(job_id: str, iteration: int, kl: float) -> dict:
    return {"kind": "progress", "job_id": job_id, "iteration": iteration, "kl": kl}


def result_message(
    job_id: str, result: ProjectionResult, user_ids: Sequence[int]
) -> dict:
    return {
        "kind": "result",
        "job_id": job_id,
        "coordinates": [
            [uid, float(result.coordinates[i, 0]), float(result.coordinates[i, 1])]
            for i, uid in enumerate(user_ids)
        ],
        "kl_trace": [[it, kl] for it, kl in result.kl_trace],
        "weights": list(result.weights) if result.weights is not None else None,
        "params": {
            "perplexity": result.params.perplexity,
            "learning_rate": result.params.learning_rate,
            "iterations": result.params.iterations,
            "early_exaggeration": result.params.early_exaggeration,
            "exaggeration_iters": result.params.exaggeration_iters,
            "seed": result.params.seed,
        },
        "warnings": list(result.warnings),
        "initial_diameter": result.initial_diameter,
        "final_kl": result.final_kl,
    }


def superseded_message(job_id: str, by_job_id: str) -> dict:
    return {"kind": "superseded", "job_id": job_id, "by": by_job_id}


def failure_message(job_id: str, error: str) -> dict:
    return {"kind": "failure", "job_id": job_id, "error": error}
