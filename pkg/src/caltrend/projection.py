"""Weight-adjustable 2-D t-SNE over the standardized feature matrix,
plus raw two-feature scatter layouts.

The t-SNE here is the exact O(n^2) algorithm: per-point Gaussian
bandwidths found by binary search against a base-2 entropy target,
symmetrized joint affinities, Student-t low-dimensional kernel, gradient
descent with momentum, adaptive per-coordinate gains and an early
exaggeration phase. No tree approximations; populations of ~10^3 run in
seconds, which is the scale this system targets.

Determinism contract: same input, same params, same seed give
bit-identical coordinates on one machine. Nothing here reads global
random state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .features import N_FEATURES, FeatureMatrix

__all__ = [
    "TsneParams",
    "CalibrationResult",
    "ProjectionResult",
    "ProjectionCancelled",
    "DegenerateWeightsError",
    "WEIGHT_PRESETS",
    "validate_weights",
    "apply_weights",
    "squared_distances",
    "perplexity_calibration",
    "joint_probabilities",
    "tsne",
    "feature_scatter",
]

# checkpoint cadence for kl_trace and progress callbacks
_TRACE_EVERY = 50


class DegenerateWeightsError(ValueError):
    pass


class ProjectionCancelled(RuntimeError):
    """Raised when a progress callback asks the run to stop."""


def validate_weights(weights: Sequence[float]) -> tuple[float, ...]:
    """Check an 11-entry weight vector: each in [0,1], not all zero."""
    w = tuple(float(x) for x in weights)
    if len(w) != N_FEATURES:
        raise ValueError(f"need {N_FEATURES} weights, got {len(w)}")
    for j, x in enumerate(w):
        if not 0.0 <= x <= 1.0 or math.isnan(x):
            raise ValueError(f"weight {j} out of [0,1]: {x}")
    if all(x == 0.0 for x in w):
        raise DegenerateWeightsError("degenerate weights: all zero")
    return w


def _preset(indices: Sequence[int]) -> tuple[float, ...]:
    return tuple(1.0 if j in set(indices) else 0.0 for j in range(N_FEATURES))


# Category groupings over the 11 features: volume-ish bookkeeping
# features, temporal-shape features, text-derived label rates.
WEIGHT_PRESETS: dict[str, tuple[float, ...]] = {
    "all": _preset(range(N_FEATURES)),
    "volume": _preset((0, 1)),
    "temporal": _preset((2, 3, 4, 5, 6, 7, 8)),
    "text": _preset((9, 10)),
}


def apply_weights(matrix: FeatureMatrix, weights: Sequence[float]) -> np.ndarray:
    """Column-scaled copy of a standardized matrix.

    Column j is multiplied by w_j, so squared Euclidean row distances
    become sum_j w_j^2 (x_ij - x_kj)^2. Zero weights assign the column
    to exact 0.0 (not x * 0.0) so projections are bit-identical across
    inputs that differ only in a zero-weighted feature.
    """
    w = validate_weights(weights)
    if not matrix.is_standardized:
        raise ValueError("apply_weights expects a standardized matrix")
    out = matrix.values.copy()
    for j, x in enumerate(w):
        if x == 0.0:
            out[:, j] = 0.0
        elif x != 1.0:
            out[:, j] *= x
    return out


def squared_distances(x: np.ndarray) -> np.ndarray:
    """Pairwise squared Euclidean distances, exact zeros on the diagonal."""
    sq = np.einsum("ij,ij->i", x, x)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)
    np.maximum(d2, 0.0, out=d2)
    np.fill_diagonal(d2, 0.0)
    return d2


@dataclass(frozen=True)
class TsneParams:
    perplexity: float = 30.0
    learning_rate: float = 200.0
    iterations: int = 1000
    early_exaggeration: float = 12.0
    exaggeration_iters: int = 250
    momentum_start: float = 0.5
    momentum_final: float = 0.8
    momentum_switch: int = 250
    seed: int = 0

    def __post_init__(self) -> None:
        if self.perplexity < 2:
            raise ValueError("perplexity must be >= 2")
        if self.iterations < self.exaggeration_iters:
            raise ValueError("iterations must cover the exaggeration phase")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.early_exaggeration < 1:
            raise ValueError("early_exaggeration must be >= 1")


@dataclass
class CalibrationResult:
    """Output of the per-point bandwidth search."""

    sigmas: np.ndarray  # n, sigma_i
    conditionals: np.ndarray  # n x n, rows p_{j|i}, zero diagonal
    entropies: np.ndarray  # n, base-2 Shannon entropy per row
    warnings: list[str] = field(default_factory=list)


def perplexity_calibration(
    distances: np.ndarray, perplexity: float, tol: float = 1e-4, max_iter: int = 64
) -> CalibrationResult:
    """Binary-search per-point precisions so each conditional
    distribution's base-2 entropy hits log2(perplexity) within tol.

    Rows that cannot converge (e.g. every neighbor at distance zero
    pins the entropy) keep the best precision found and are listed in
    warnings rather than raising.
    """
    n = distances.shape[0]
    target = math.log2(perplexity)
    # shift each row by its smallest off-diagonal distance; the
    # normalized conditionals are shift-invariant and exp stays tame
    d = distances.astype(np.float64, copy=True)
    np.fill_diagonal(d, np.inf)
    d -= d.min(axis=1, keepdims=True)

    beta = np.ones(n)
    beta_lo = np.zeros(n)
    beta_hi = np.full(n, np.inf)
    active = np.ones(n, dtype=bool)
    probs = np.zeros((n, n))
    entropy = np.zeros(n)

    for _ in range(max_iter):
        w = np.exp(-beta[:, None] * d[:])  # diagonal exp(-inf) = 0
        row_sum = w.sum(axis=1)
        p = w / row_sum[:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            logp = np.where(p > 0.0, np.log2(np.where(p > 0.0, p, 1.0)), 0.0)
        h = -(p * logp).sum(axis=1)
        probs[active] = p[active]
        entropy[active] = h[active]
        diff = h - target
        active &= np.abs(diff) > tol
        if not active.any():
            break
        too_spread = active & (diff > 0)
        too_tight = active & (diff < 0)
        beta_lo[too_spread] = beta[too_spread]
        beta_hi[too_tight] = beta[too_tight]
        beta[too_spread] = np.where(
            np.isinf(beta_hi[too_spread]),
            beta[too_spread] * 2.0,
            (beta[too_spread] + beta_hi[too_spread]) / 2.0,
        )
        beta[too_tight] = np.where(
            beta_lo[too_tight] == 0.0,
            beta[too_tight] / 2.0,
            (beta[too_tight] + beta_lo[too_tight]) / 2.0,
        )

    warnings = []
    if active.any():
        warnings.append(
            f"perplexity calibration: {int(active.sum())} of {n} points "
            f"did not reach |H - log2(perplexity)| <= {tol}; best sigma kept"
        )
    return CalibrationResult(
        sigmas=np.sqrt(1.0 / (2.0 * beta)),
        conditionals=probs,
        entropies=entropy,
        warnings=warnings,
    )


def _effective_perplexity(perplexity: float, n: int) -> tuple[float, list[str]]:
    # perplexity above (n-1)/3 makes the entropy target unreachable for
    # small n; clamp and say so instead of failing
    limit = (n - 1) / 3.0
    if perplexity > limit:
        return limit, [
            f"perplexity {perplexity} clamped to {limit} for n={n} points"
        ]
    return perplexity, []


def joint_probabilities(
    x: np.ndarray, perplexity: float
) -> tuple[np.ndarray, CalibrationResult, list[str]]:
    """Symmetrized affinities P with p_ij = (p_{j|i} + p_{i|j}) / 2n.

    P is symmetric with zero diagonal and sums to exactly 1 up to float
    roundoff; no flooring is applied here.
    """
    n = x.shape[0]
    eff, warnings = _effective_perplexity(perplexity, n)
    cal = perplexity_calibration(squared_distances(x), eff)
    p = (cal.conditionals + cal.conditionals.T) / (2.0 * n)
    return p, cal, warnings + cal.warnings


@dataclass
class ProjectionResult:
    coordinates: np.ndarray  # n x 2
    kl_trace: list[tuple[int, float]]  # (iteration, KL vs true P)
    params: TsneParams
    weights: tuple[float, ...] | None
    warnings: list[str]
    initial_diameter: float

    @property
    def final_kl(self) -> float:
        return self.kl_trace[-1][1]

    def post_exaggeration_trace(self) -> list[tuple[int, float]]:
        return [
            (it, kl)
            for it, kl in self.kl_trace
            if it > self.params.exaggeration_iters
        ]


def _kl_divergence(p: np.ndarray, q: np.ndarray) -> float:
    mask = p > 0.0
    return float(np.sum(p[mask] * np.log(p[mask] / np.maximum(q[mask], 1e-12))))


ProgressFn = Callable[[int, float], bool]


def tsne(
    x: np.ndarray,
    params: TsneParams | None = None,
    weights: tuple[float, ...] | None = None,
    progress: ProgressFn | None = None,
) -> ProjectionResult:
    """Project rows of x to 2-D.

    ``progress`` is called at every checkpoint with (iteration, kl);
    returning False aborts the run with :class:`ProjectionCancelled`.
    Raises FloatingPointError if coordinates ever go non-finite rather
    than returning NaNs.
    """
    params = params or TsneParams()
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    if n < 4:
        raise ValueError("t-SNE needs at least 4 points")

    p_true, _cal, warnings = joint_probabilities(x, params.perplexity)

    rng = np.random.default_rng(params.seed)
    y = rng.standard_normal((n, 2)) * 1e-4
    init_d2 = squared_distances(y)
    initial_diameter = float(np.sqrt(init_d2.max()))

    velocity = np.zeros_like(y)
    gains = np.ones_like(y)
    kl_trace: list[tuple[int, float]] = []

    for it in range(params.iterations):
        exaggerating = it < params.exaggeration_iters
        p_eff = p_true * params.early_exaggeration if exaggerating else p_true

        d2 = squared_distances(y)
        num = 1.0 / (1.0 + d2)
        np.fill_diagonal(num, 0.0)
        q = num / num.sum()

        pq = (p_eff - q) * num
        grad = 4.0 * (pq.sum(axis=1)[:, None] * y - pq @ y)

        same_sign = np.sign(grad) == np.sign(velocity)
        gains = np.where(same_sign, gains * 0.8, gains + 0.2)
        np.maximum(gains, 0.01, out=gains)

        momentum = (
            params.momentum_start
            if it < params.momentum_switch
            else params.momentum_final
        )
        velocity = momentum * velocity - params.learning_rate * (gains * grad)
        y += velocity
        y -= y.mean(axis=0)

        if not np.isfinite(y).all():
            raise FloatingPointError(
                f"t-SNE diverged to non-finite coordinates at iteration {it + 1}"
            )

        iteration = it + 1
        if iteration % _TRACE_EVERY == 0 or iteration == params.iterations:
            d2 = squared_distances(y)
            num = 1.0 / (1.0 + d2)
            np.fill_diagonal(num, 0.0)
            kl = _kl_divergence(p_true, num / num.sum())
            if not kl_trace or kl_trace[-1][0] != iteration:
                kl_trace.append((iteration, kl))
            if progress is not None and progress(iteration, kl) is False:
                raise ProjectionCancelled(f"cancelled at iteration {iteration}")

    return ProjectionResult(
        coordinates=y,
        kl_trace=kl_trace,
        params=params,
        weights=weights,
        warnings=warnings,
        initial_diameter=initial_diameter,
    )


def project(
    matrix: FeatureMatrix,
    weights: Sequence[float],
    params: TsneParams | None = None,
    progress: ProgressFn | None = None,
) -> ProjectionResult:
    """Convenience pipeline: validate weights, scale columns, run t-SNE."""
    w = validate_weights(weights)
    return tsne(apply_weights(matrix, w), params, weights=w, progress=progress)


def feature_scatter(
    matrix: FeatureMatrix, x_index: int, y_index: int
) -> np.ndarray:
    """Raw two-feature scatter: n x 2 of unstandardized values."""
    if matrix.is_standardized:
        raise ValueError("feature_scatter expects the raw matrix")
    for idx in (x_index, y_index):
        if not 0 <= idx < N_FEATURES:
            raise IndexError(f"feature index {idx} out of range")
    if x_index == y_index:
        raise ValueError("scatter axes must be distinct")
    return matrix.values[:, [x_index, y_index]].copy()


def rerun_params(params: TsneParams, **changes) -> TsneParams:
    return replace(params, **changes)
