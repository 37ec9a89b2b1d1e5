"""Per-user behavioral feature vectors and population standardization.

Eleven features, fixed order:

==  =================  =============================================
 0  modification_rate  fraction of events with updated != created
 1  monthly_volume     events per active month
 2  weekend_ratio      fraction of events starting Sat/Sun (local)
 3  weekday_ratio      complement of weekend_ratio
 4  morning            start hour in [06, 11)
 5  lunch              start hour in [11, 14)
 6  afternoon          start hour in [14, 18)
 7  evening            start hour in [18, 22)
 8  night              start hour in [22, 24) or [00, 06)
 9  work_rate          fraction of events labeled Work
10  home_rate          fraction of events labeled Home
==  =================  =============================================

Hour bands partition the day, so features 4-8 sum to 1 for any user
with at least one event; weekend_ratio + weekday_ratio = 1 likewise.
All band/weekend decisions use the event's local wall-clock start.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import LifeMode, UserRecord

__all__ = [
    "FEATURE_NAMES",
    "FeatureMatrix",
    "EmptyUserFeaturesError",
    "PopulationTooSmallError",
    "extract_features",
    "build_matrix",
    "standardize",
    "matrix_to_table",
]

FEATURE_NAMES = (
    "modification_rate",
    "monthly_volume",
    "weekend_ratio",
    "weekday_ratio",
    "morning",
    "lunch",
    "afternoon",
    "evening",
    "night",
    "work_rate",
    "home_rate",
)

N_FEATURES = len(FEATURE_NAMES)

# std below this is treated as a constant column
_CONSTANT_EPS = 1e-12


class EmptyUserFeaturesError(ValueError):
    pass


class PopulationTooSmallError(ValueError):
    pass


def _band_index(hour: int) -> int:
    """Map a local start hour (0-23) to feature index 4..8."""
    if 6 <= hour < 11:
        return 4
    if 11 <= hour < 14:
        return 5
    if 14 <= hour < 18:
        return 6
    if 18 <= hour < 22:
        return 7
    return 8  # [22,24) and [00,06)


def extract_features(record: UserRecord) -> np.ndarray:
    """11-entry float vector for one user; pure and order-invariant."""
    if not record.events:
        raise EmptyUserFeaturesError(f"empty user {record.user_id}")
    n = len(record.events)
    modified = 0
    weekend = 0
    bands = [0, 0, 0, 0, 0]
    work = 0
    home = 0
    for ev in record.events:
        if ev.updated != ev.created:
            modified += 1
        local = ev.local_start()
        # Monday=0 .. Sunday=6
        if local.weekday() >= 5:
            weekend += 1
        bands[_band_index(local.hour) - 4] += 1
        if LifeMode.WORK in ev.labels:
            work += 1
        if LifeMode.HOME in ev.labels:
            home += 1
    vec = np.empty(N_FEATURES, dtype=np.float64)
    vec[0] = modified / n
    vec[1] = n / record.active_months
    vec[2] = weekend / n
    vec[3] = (n - weekend) / n
    for i, count in enumerate(bands):
        vec[4 + i] = count / n
    vec[9] = work / n
    vec[10] = home / n
    return vec


@dataclass
class FeatureMatrix:
    """Population feature matrix with aligned user_id order.

    ``means``/``stds`` are populated by :func:`standardize`; a raw
    matrix carries None there.
    """

    user_ids: list[int]
    values: np.ndarray  # n x 11
    means: np.ndarray | None = None
    stds: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.values.ndim != 2 or self.values.shape[1] != N_FEATURES:
            raise ValueError("matrix must be n x 11")
        if self.values.shape[0] != len(self.user_ids):
            raise ValueError("row count must match user_ids")

    @property
    def is_standardized(self) -> bool:
        return self.means is not None


def build_matrix(store: dict[int, UserRecord]) -> FeatureMatrix:
    """Raw feature matrix over the whole store, rows in user_id order."""
    user_ids = sorted(store)
    rows = [extract_features(store[uid]) for uid in user_ids]
    values = np.vstack(rows) if rows else np.empty((0, N_FEATURES))
    return FeatureMatrix(user_ids=user_ids, values=values)


def standardize(matrix: FeatureMatrix) -> FeatureMatrix:
    """Column z-scores with population std; constant columns become zeros.

    Raises :class:`PopulationTooSmallError` for fewer than 2 users.
    """
    n = matrix.values.shape[0]
    if n < 2:
        raise PopulationTooSmallError("population too small: need >= 2 users")
    means = matrix.values.mean(axis=0)
    stds = matrix.values.std(axis=0)  # population std (ddof=0)
    constant = stds < _CONSTANT_EPS
    safe = np.where(constant, 1.0, stds)
    z = (matrix.values - means) / safe
    z[:, constant] = 0.0
    return FeatureMatrix(
        user_ids=list(matrix.user_ids), values=z, means=means, stds=stds
    )


def matrix_to_table(matrix: FeatureMatrix) -> str:
    """Columnar text export: header with canonical names, one row per user."""
    lines = ["user_id\t" + "\t".join(FEATURE_NAMES)]
    for uid, row in zip(matrix.user_ids, matrix.values):
        lines.append(str(uid) + "\t" + "\t".join(format(v, ".17g") for v in row))
    return "\n".join(lines) + "\n"
