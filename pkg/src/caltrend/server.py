"""HTTP API plus a push channel for long-running projection jobs.

All synchronous reads are plain GETs whose bodies come from
:mod:`caltrend.schemas`, so any response can be reproduced byte for
byte by a direct library call. The only stateful surface is the
projection job machinery: per-session jobs run on a small worker pool,
progress flows through a per-session queue drained by the /ws endpoint,
and a new job for a session supersedes the previous one.

The dataset is immutable after load (reads are lock-free); it is
expected to be the output of the batch pipeline, already deidentified
and labeled. Set CALTREND_DATA to the artifact directory or pass
--data on the command line.
"""

from __future__ import annotations

import asyncio
import os
import queue
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

from fastapi import FastAPI, Request, Response, WebSocket, WebSocketDisconnect

from . import schemas
from .features import FeatureMatrix, build_matrix, standardize
from .ingestion import parse_file
from .model import LifeMode, UserRecord, build_store
from .projection import (
    DegenerateWeightsError,
    ProjectionCancelled,
    TsneParams,
    feature_scatter,
    project,
)
from .temporal import day_grid, keyword_distribution, weekly_heatmap
from .topics import TopicService

__all__ = ["Dataset", "JobManager", "create_app", "serve"]

DEFAULT_PORT = 8080
_MODES = {"all": None, "work": LifeMode.WORK, "home": LifeMode.HOME}


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        self.status = status
        self.message = message


@dataclass
class Dataset:
    """Preprocessed immutable store plus derived matrices and services."""

    store: dict[int, UserRecord]
    raw_matrix: FeatureMatrix = field(init=False)
    standardized: FeatureMatrix = field(init=False)
    topics: TopicService = field(init=False)

    def __post_init__(self) -> None:
        self.raw_matrix = build_matrix(self.store)
        self.standardized = standardize(self.raw_matrix)
        self.topics = TopicService(self.store)

    @classmethod
    def load(cls, data_dir: str | Path) -> "Dataset":
        path = Path(data_dir) / "events.log"
        if not path.exists():
            raise FileNotFoundError(f"no events.log under {data_dir}")
        events, _report = parse_file(path)
        return cls(store=build_store(events))

    def records(self, user_ids: list[int] | None) -> list[UserRecord]:
        if user_ids is None:
            return [self.store[uid] for uid in sorted(self.store)]
        return [self.store[uid] for uid in user_ids]


class JobManager:
    """Per-session projection jobs on a bounded worker pool.

    One active job per session: submitting supersedes the previous job,
    which emits a terminal superseded message at its next checkpoint.
    Messages queue per session until the /ws drain picks them up.
    """

    def __init__(self, dataset: Dataset, max_workers: int = 2):
        self.dataset = dataset
        self.executor = ThreadPoolExecutor(max_workers=max_workers)
        self.lock = threading.Lock()
        self.queues: dict[str, queue.Queue] = {}
        self.active: dict[str, tuple[str, threading.Event]] = {}
        self.superseded_by: dict[str, str] = {}
        self.counters: dict[str, int] = {}

    def queue_for(self, session: str) -> queue.Queue:
        with self.lock:
            if session not in self.queues:
                self.queues[session] = queue.Queue()
            return self.queues[session]

    def submit(
        self, session: str, weights: tuple[float, ...], params: TsneParams
    ) -> str:
        q = self.queue_for(session)
        with self.lock:
            self.counters[session] = self.counters.get(session, 0) + 1
            job_id = f"{session}-job-{self.counters[session]}"
            previous = self.active.get(session)
            if previous is not None:
                prev_id, prev_cancel = previous
                self.superseded_by[prev_id] = job_id
                prev_cancel.set()
            cancel = threading.Event()
            self.active[session] = (job_id, cancel)
        self.executor.submit(self._run, session, job_id, cancel, weights, params, q)
        return job_id

    def _finish(self, session: str, job_id: str, message: dict, q: queue.Queue) -> None:
        with self.lock:
            current = self.active.get(session)
            if current is not None and current[0] == job_id:
                del self.active[session]
            q.put(message)

    def _run(
        self,
        session: str,
        job_id: str,
        cancel: threading.Event,
        weights: tuple[float, ...],
        params: TsneParams,
        q: queue.Queue,
    ) -> None:
        if cancel.is_set():
            self._finish(
                session, job_id,
                schemas.superseded_message(job_id, self.superseded_by[job_id]), q,
            )
            return

        def progress(iteration: int, kl: float) -> bool:
            if cancel.is_set():
                return False
            q.put(schemas.progress_message(job_id, iteration, kl))
            return True

        try:
            result = project(
                self.dataset.standardized, weights, params, progress=progress
            )
        except ProjectionCancelled:
            self._finish(
                session, job_id,
                schemas.superseded_message(job_id, self.superseded_by[job_id]), q,
            )
        except Exception as exc:  # terminal failure forwarded, never raised
            self._finish(session, job_id, schemas.failure_message(job_id, str(exc)), q)
        else:
            if cancel.is_set():
                self._finish(
                    session, job_id,
                    schemas.superseded_message(job_id, self.superseded_by[job_id]), q,
                )
            else:
                self._finish(
                    session, job_id,
                    schemas.result_message(job_id, result, self.dataset.standardized.user_ids),
                    q,
                )


def _json_response(payload: dict, status: int = 200) -> Response:
    return Response(
        content=schemas.canonical_json(payload),
        media_type="application/json",
        status_code=status,
    )


def _parse_users(dataset: Dataset, raw: str | None) -> list[int] | None:
    if raw is None or raw == "":
        return None
    try:
        ids = sorted({int(part) for part in raw.split(",")})
    except ValueError:
        raise ApiError(422, f"users must be comma-separated integers: {raw!r}")
    for uid in ids:
        if uid not in dataset.store:
            raise ApiError(422, f"unknown user {uid}")
    return ids


def _parse_mode(raw: str | None, default: str = "all") -> LifeMode | None:
    value = default if raw is None else raw
    if value not in _MODES:
        raise ApiError(422, f"mode must be one of all|work|home: {value!r}")
    return _MODES[value]


def _feature_index(raw: str | None, name: str) -> int:
    from .features import FEATURE_NAMES

    if raw is None:
        raise ApiError(422, f"{name} is required")
    if raw in FEATURE_NAMES:
        return FEATURE_NAMES.index(raw)
    try:
        idx = int(raw)
    except ValueError:
        raise ApiError(422, f"{name} must be a feature index or name: {raw!r}")
    if not 0 <= idx < len(FEATURE_NAMES):
        raise ApiError(422, f"{name} index out of range: {idx}")
    return idx


def _tsne_params(raw: dict | None) -> TsneParams:
    if raw is None:
        return TsneParams()
    if not isinstance(raw, dict):
        raise ApiError(422, "params must be an object")
    allowed = {
        "perplexity", "learning_rate", "iterations", "early_exaggeration",
        "exaggeration_iters", "momentum_switch", "seed",
    }
    unknown = set(raw) - allowed
    if unknown:
        raise ApiError(422, f"unknown params: {sorted(unknown)}")
    try:
        return TsneParams(**raw)
    except (TypeError, ValueError) as exc:
        raise ApiError(422, f"invalid params: {exc}")


def create_app(data_dir: str | Path | None = None, dataset: Dataset | None = None) -> FastAPI:
    """Build the service. Pass a loaded Dataset directly (tests) or a
    directory; default is the CALTREND_DATA environment variable."""
    if dataset is None:
        if data_dir is None:
            data_dir = os.environ.get("CALTREND_DATA")
            if not data_dir:
                raise RuntimeError(
                    "no dataset: pass data_dir or set CALTREND_DATA"
                )
        dataset = Dataset.load(data_dir)

    app = FastAPI(title="caltrend", docs_url=None, redoc_url=None)
    app.state.dataset = dataset
    app.state.jobs = JobManager(dataset)

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError) -> Response:
        return _json_response(schemas.error_payload(exc.message), exc.status)

    def _record(user_id: int) -> UserRecord:
        record = dataset.store.get(user_id)
        if record is None:
            raise ApiError(404, f"unknown user {user_id}")
        return record

    @app.get("/api/users")
    async def users() -> Response:
        return _json_response(schemas.users_payload(dataset.store))

    @app.get("/api/users/{user_id}")
    async def user(user_id: int) -> Response:
        return _json_response(schemas.user_payload(_record(user_id)))

    @app.get("/api/users/{user_id}/features")
    async def user_features(user_id: int) -> Response:
        _record(user_id)
        return _json_response(
            schemas.features_payload(dataset.raw_matrix, dataset.standardized, user_id)
        )

    @app.get("/api/users/{user_id}/glyph")
    async def user_glyph(user_id: int) -> Response:
        return _json_response(schemas.glyph_payload(_record(user_id)))

    @app.get("/api/users/{user_id}/daygrid")
    async def user_daygrid(user_id: int, request: Request) -> Response:
        record = _record(user_id)
        params = request.query_params
        raw_from, raw_to = params.get("from"), params.get("to")
        if not raw_from or not raw_to:
            raise ApiError(422, "from and to dates are required")
        try:
            window_start = date.fromisoformat(raw_from)
            window_end = date.fromisoformat(raw_to)
        except ValueError:
            raise ApiError(422, "from/to must be ISO dates (YYYY-MM-DD)")
        highlight = params.get("highlight")
        if highlight is not None and highlight not in ("work", "home"):
            raise ApiError(422, f"highlight must be work|home: {highlight!r}")
        try:
            cells = day_grid(record, window_start, window_end)
        except ValueError as exc:
            raise ApiError(422, str(exc))
        return _json_response(
            schemas.daygrid_payload(user_id, cells, window_start, window_end, highlight)
        )

    @app.get("/api/heatmap/weekly")
    async def heatmap_weekly(request: Request) -> Response:
        params = request.query_params
        user_ids = _parse_users(dataset, params.get("users"))
        mode = _parse_mode(params.get("mode"))
        records = dataset.records(user_ids)
        grid = weekly_heatmap(records, mode)
        diff_grid = None
        if params.get("diff"):
            diff_mode = _parse_mode(params.get("diff"))
            diff_grid = weekly_heatmap(records, diff_mode)
        shown = user_ids if user_ids is not None else sorted(dataset.store)
        return _json_response(schemas.heatmap_payload(grid, shown, diff_grid))

    @app.get("/api/topics")
    async def topics(request: Request) -> Response:
        params = request.query_params
        user_ids = _parse_users(dataset, params.get("users"))
        if user_ids is None:
            raise ApiError(422, "users selection is required")
        diff = params.get("diff", "") in ("1", "true", "yes")
        if diff:
            work, home = dataset.topics.diff_selection(user_ids)
        else:
            work = dataset.topics.aggregate_selection(user_ids, LifeMode.WORK)
            home = dataset.topics.aggregate_selection(user_ids, LifeMode.HOME)
        return _json_response(schemas.topics_payload(user_ids, work, home, diff))

    @app.get("/api/keyword-distribution")
    async def keyword_dist(request: Request) -> Response:
        params = request.query_params
        user_ids = _parse_users(dataset, params.get("users"))
        keyword = params.get("keyword")
        if not keyword:
            raise ApiError(422, "keyword is required")
        records = dataset.records(user_ids)
        dist = keyword_distribution(records, keyword)
        shown = user_ids if user_ids is not None else sorted(dataset.store)
        return _json_response(schemas.keyword_distribution_payload(shown, dist))

    @app.get("/api/scatter")
    async def scatter(request: Request) -> Response:
        params = request.query_params
        x_index = _feature_index(params.get("x"), "x")
        y_index = _feature_index(params.get("y"), "y")
        if x_index == y_index:
            raise ApiError(422, "scatter axes must be distinct")
        coords = feature_scatter(dataset.raw_matrix, x_index, y_index)
        return _json_response(
            schemas.scatter_payload(dataset.raw_matrix, coords, x_index, y_index)
        )

    @app.post("/api/projection")
    async def projection(request: Request) -> Response:
        session = request.query_params.get("session", "default")
        try:
            body = await request.json()
        except Exception:
            raise ApiError(422, "request body must be JSON")
        if not isinstance(body, dict) or "weights" not in body:
            raise ApiError(422, "body must carry a weights list")
        raw_weights = body["weights"]
        if not isinstance(raw_weights, list) or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool)
            for x in raw_weights
        ):
            raise ApiError(422, "weights must be a list of numbers")
        from .projection import validate_weights

        try:
            weights = validate_weights(raw_weights)
        except DegenerateWeightsError:
            raise ApiError(422, "degenerate weights")
        except ValueError as exc:
            raise ApiError(422, str(exc))
        params = _tsne_params(body.get("params"))
        job_id = app.state.jobs.submit(session, weights, params)
        return _json_response(schemas.projection_started_payload(job_id, session))

    @app.websocket("/ws")
    async def ws(websocket: WebSocket) -> None:
        session = websocket.query_params.get("session", "default")
        await websocket.accept()
        q = app.state.jobs.queue_for(session)
        try:
            while True:
                try:
                    message = q.get_nowait()
                except queue.Empty:
                    await asyncio.sleep(0.02)
                    continue
                await websocket.send_text(schemas.canonical_json(message).decode("utf-8"))
        except WebSocketDisconnect:
            pass

    return app


def serve(data_dir: str | Path | None = None, port: int = DEFAULT_PORT) -> None:
    """Blocking entry point used by the CLI."""
    import uvicorn

    app = create_app(data_dir)
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")
