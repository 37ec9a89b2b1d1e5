"""Batch pipeline driver.

Stages write plain files into a stage-named artifact directory and the
next stage reads them back, so every intermediate is inspectable:

    synth    --out d/         events.log, truth.txt, names.txt
    ingest   --input d/events.log --names d/names.txt --out s/
                              deidentified events.log, ingest_report.json
    label    --input s/ --out l/
                              labeled events.log, label_stats.json
    features --input l/ --out f/
                              features.tsv, standardized.tsv
    project  --input f/ --out p/
                              projection.tsv, projection_meta.json
    topics   --input l/ --out t/ --users 1,2,3
    heatmap  --input l/ --out h/ --users 3 --mode work --diff home
    serve    --input l/ --port 8080

Artifacts carry no timestamps, and every random choice flows from
--seed, so rerunning a stage with identical inputs produces identical
bytes.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from .features import build_matrix, matrix_to_table, standardize, FEATURE_NAMES, FeatureMatrix
from .ingestion import (
    NameLexicon,
    Redactor,
    load_name_lexicon,
    parse_file,
    write_events,
)
from .lifemode import ConceptLexicon, corpus_stats, default_lexicon, label_store, load_keyword_file
from .model import LifeMode, build_store
from .projection import TsneParams, project, validate_weights
from . import schemas
from .synth import DEFAULT_PERSONAS, full_scale_personas, write_corpus
from .temporal import weekly_heatmap
from .topics import TopicService

__all__ = ["main", "CommandError"]


class CommandError(Exception):
    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.message = message


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(
        json.dumps(payload, indent=2, sort_keys=False) + "\n", encoding="utf-8"
    )


def _require(stage: str, path: Path, upstream: str) -> None:
    if not path.exists():
        raise CommandError(stage, f"run {upstream} first (missing {path})")


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# --- stages ---------------------------------------------------------------

def cmd_synth(args) -> int:
    out = _out_dir(args)
    if args.personas == "default":
        personas = [(p, args.users) for p in DEFAULT_PERSONAS]
    elif args.personas == "full-scale":
        personas = full_scale_personas(users=args.users if args.users != 100 else 1025)
    else:
        raise CommandError("synth", f"unknown persona set {args.personas!r}")
    stats = write_corpus(out, personas, seed=args.seed)
    print(f"synth: {stats['users']} users, {stats['events']} events -> {out}")
    return 0


def cmd_ingest(args) -> int:
    stage = "ingest"
    if not args.input:
        raise CommandError(stage, "--input events file is required")
    source = Path(args.input)
    if not source.exists():
        raise CommandError(stage, f"no such input {source}")
    out = _out_dir(args)
    names = load_name_lexicon(args.names) if args.names else NameLexicon()
    # salt is derived from the seed so reruns are byte-identical
    salt = hashlib.sha256(f"caltrend-redaction-{args.seed}".encode()).digest()
    try:
        events, report = parse_file(source)
    except ValueError as exc:
        raise CommandError(stage, str(exc))
    redactor = Redactor(names=names, salt=salt)
    events = redactor.deidentify_all(events)
    write_events(out / "events.log", events)
    _write_json(
        out / "ingest_report.json",
        {
            "total_lines": report.total_lines,
            "parsed": report.parsed,
            "rejected": report.rejected,
            "rejection_reasons": dict(sorted(report.rejection_reasons.items())),
            "redactions": dict(sorted(redactor.map.class_counts.items())),
            "names_removed": redactor.map.names_removed,
        },
    )
    print(f"ingest: parsed {report.parsed}, rejected {report.rejected} -> {out}")
    return 0


def _load_lexicon(args) -> ConceptLexicon:
    if args.work_lexicon or args.home_lexicon:
        if not (args.work_lexicon and args.home_lexicon):
            raise CommandError("label", "--work-lexicon and --home-lexicon go together")
        return ConceptLexicon(
            work=load_keyword_file(args.work_lexicon),
            home=load_keyword_file(args.home_lexicon),
        )
    return default_lexicon()


def cmd_label(args) -> int:
    stage = "label"
    src = Path(args.input)
    _require(stage, src / "events.log", "ingest")
    _require(stage, src / "ingest_report.json", "ingest")
    out = _out_dir(args)
    lexicon = _load_lexicon(args)
    events, _ = parse_file(src / "events.log")
    store = label_store(build_store(events), lexicon)
    labeled_events = [ev for record in store.values() for ev in record.events]
    write_events(out / "events.log", labeled_events)
    stats = corpus_stats(store)
    _write_json(
        out / "label_stats.json",
        {
            "total": stats.total,
            "labeled": stats.labeled,
            "work_labeled": stats.work_labeled,
            "home_labeled": stats.home_labeled,
            "multi_labeled": stats.multi_labeled,
            "labeled_fraction": stats.labeled_fraction,
            "work_fraction": stats.work_fraction,
            "home_fraction": stats.home_fraction,
            "multi_fraction": stats.multi_fraction,
        },
    )
    print(
        f"label: {stats.labeled}/{stats.total} labeled "
        f"({stats.work_labeled} work, {stats.home_labeled} home) -> {out}"
    )
    return 0


def cmd_features(args) -> int:
    stage = "features"
    src = Path(args.input)
    _require(stage, src / "events.log", "label")
    _require(stage, src / "label_stats.json", "label")
    out = _out_dir(args)
    events, _ = parse_file(src / "events.log")
    store = build_store(events)
    raw = build_matrix(store)
    try:
        standardized = standardize(raw)
    except ValueError as exc:
        raise CommandError(stage, str(exc))
    (out / "features.tsv").write_text(matrix_to_table(raw), encoding="utf-8")
    (out / "standardized.tsv").write_text(matrix_to_table(standardized), encoding="utf-8")
    print(f"features: {len(raw.user_ids)} users x {len(FEATURE_NAMES)} features -> {out}")
    return 0


def _read_matrix(path: Path, standardized: bool) -> FeatureMatrix:
    import numpy as np

    lines = path.read_text(encoding="utf-8").splitlines()
    user_ids, rows = [], []
    for line in lines[1:]:
        parts = line.split("\t")
        user_ids.append(int(parts[0]))
        rows.append([float(x) for x in parts[1:]])
    n = len(FEATURE_NAMES)
    return FeatureMatrix(
        user_ids=user_ids,
        values=np.array(rows, dtype=np.float64),
        means=np.zeros(n) if standardized else None,
        stds=np.ones(n) if standardized else None,
    )


def cmd_project(args) -> int:
    stage = "project"
    src = Path(args.input)
    _require(stage, src / "standardized.tsv", "features")
    out = _out_dir(args)
    matrix = _read_matrix(src / "standardized.tsv", standardized=True)
    try:
        weights = validate_weights([float(x) for x in args.weights.split(",")])
        params = TsneParams(
            perplexity=args.perplexity, iterations=args.iterations, seed=args.seed
        )
        result = project(matrix, weights, params)
    except ValueError as exc:
        raise CommandError(stage, str(exc))
    table = ["user_id\tx\ty"]
    for i, uid in enumerate(matrix.user_ids):
        x, y = result.coordinates[i]
        table.append(f"{uid}\t{format(x, '.17g')}\t{format(y, '.17g')}")
    (out / "projection.tsv").write_text("\n".join(table) + "\n", encoding="utf-8")
    _write_json(
        out / "projection_meta.json",
        {
            "seed": args.seed,
            "perplexity": args.perplexity,
            "iterations": args.iterations,
            "weights": list(weights),
            "final_kl": result.final_kl,
            "kl_trace": [[it, kl] for it, kl in result.kl_trace],
            "warnings": result.warnings,
            "initial_diameter": result.initial_diameter,
        },
    )
    print(f"project: {len(matrix.user_ids)} users, final KL {result.final_kl:.4f} -> {out}")
    return 0


def _selection(args, store, stage: str) -> list[int]:
    if not args.users:
        return sorted(store)
    try:
        ids = sorted({int(x) for x in args.users.split(",")})
    except ValueError:
        raise CommandError(stage, f"--users must be comma-separated ids: {args.users!r}")
    for uid in ids:
        if uid not in store:
            raise CommandError(stage, f"unknown user {uid}")
    return ids


def cmd_topics(args) -> int:
    stage = "topics"
    src = Path(args.input)
    _require(stage, src / "events.log", "label")
    _require(stage, src / "label_stats.json", "label")
    out = _out_dir(args)
    events, _ = parse_file(src / "events.log")
    store = build_store(events)
    ids = _selection(args, store, stage)
    service = TopicService(store, k=args.topics_k, base_seed=args.seed)
    if args.diff:
        work, home = service.diff_selection(ids)
    else:
        work = service.aggregate_selection(ids, LifeMode.WORK)
        home = service.aggregate_selection(ids, LifeMode.HOME)
    payload = schemas.topics_payload(ids, work, home, bool(args.diff))
    (out / "topics.json").write_bytes(schemas.canonical_json(payload) + b"\n")
    print(f"topics: {len(ids)} users, diff={bool(args.diff)} -> {out}")
    return 0


_MODES = {"all": None, "work": LifeMode.WORK, "home": LifeMode.HOME}


def cmd_heatmap(args) -> int:
    stage = "heatmap"
    src = Path(args.input)
    _require(stage, src / "events.log", "label")
    _require(stage, src / "label_stats.json", "label")
    out = _out_dir(args)
    events, _ = parse_file(src / "events.log")
    store = build_store(events)
    ids = _selection(args, store, stage)
    if args.mode not in _MODES:
        raise CommandError(stage, f"--mode must be all|work|home: {args.mode!r}")
    records = [store[uid] for uid in ids]
    grid = weekly_heatmap(records, _MODES[args.mode])
    diff_grid = None
    if args.diff:
        if args.diff not in _MODES:
            raise CommandError(stage, f"--diff must be all|work|home: {args.diff!r}")
        diff_grid = weekly_heatmap(records, _MODES[args.diff])
    payload = schemas.heatmap_payload(grid, ids, diff_grid)
    (out / "heatmap.json").write_bytes(schemas.canonical_json(payload) + b"\n")
    print(f"heatmap: {grid.total} events over {len(ids)} users -> {out}")
    return 0


def cmd_serve(args) -> int:
    from .server import serve

    try:
        serve(args.input or None, port=args.port)
    except (FileNotFoundError, RuntimeError) as exc:
        raise CommandError("serve", str(exc))
    return 0


# --- argument wiring ------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="caltrend", description="calendar behavior analytics pipeline"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **flags):
        p = sub.add_parser(name)
        for flag, kwargs in flags.items():
            p.add_argument(f"--{flag.replace('_', '-')}", **kwargs)
        p.set_defaults(fn=fn)
        return p

    add(
        "synth", cmd_synth,
        out={"required": True},
        personas={"default": "default"},
        users={"type": int, "default": 100, "help": "users per persona (default) or total (full-scale)"},
        seed={"type": int, "default": 7},
    )
    add(
        "ingest", cmd_ingest,
        input={"required": True, "help": "raw events file"},
        out={"required": True},
        names={"default": None, "help": "name lexicon file"},
        seed={"type": int, "default": 0, "help": "redaction salt seed"},
    )
    add(
        "label", cmd_label,
        input={"required": True, "help": "ingest artifact dir"},
        out={"required": True},
        work_lexicon={"default": None},
        home_lexicon={"default": None},
    )
    add(
        "features", cmd_features,
        input={"required": True, "help": "label artifact dir"},
        out={"required": True},
    )
    add(
        "project", cmd_project,
        input={"required": True, "help": "features artifact dir"},
        out={"required": True},
        weights={"default": ",".join(["1"] * len(FEATURE_NAMES))},
        perplexity={"type": float, "default": 30.0},
        iterations={"type": int, "default": 1000},
        seed={"type": int, "default": 0},
    )
    add(
        "topics", cmd_topics,
        input={"required": True, "help": "label artifact dir"},
        out={"required": True},
        users={"default": ""},
        topics_k={"type": int, "default": 5},
        seed={"type": int, "default": 0},
        diff={"action": "store_true"},
    )
    add(
        "heatmap", cmd_heatmap,
        input={"required": True, "help": "label artifact dir"},
        out={"required": True},
        users={"default": ""},
        mode={"default": "all"},
        diff={"default": None, "help": "subtract this mode's grid"},
    )
    add(
        "serve", cmd_serve,
        input={"default": None, "help": "label artifact dir (or CALTREND_DATA)"},
        port={"type": int, "default": 8080},
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
