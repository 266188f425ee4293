"""Single entry point for the pipeline: ingest, distribution, sample, threads,
serve, report, export, import.

Machine-readable JSON goes to stdout; diagnostics and the echoed effective
config go to stderr. Exit codes: 0 success, 1 runtime failure, 2 usage error.
Values resolve as flags > config file (--config, JSON) > defaults.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .annostore import AnnotationStore, load_events
from .corpus import CorpusStore, StorageError
from .ingest import IngestFilter, ingest_paths
from .records import parse_record, parse_timestamp, record_to_line
from .report import build_report, day_table, day_table_csv
from .sampler import SamplePlan, compute_distribution, sample_sources
from .service import Dataset, create_app, import_bundle
from .threads import build_all, corpus_reply_provider, read_threads_dir, write_thread
from .util import canonical_json

DEFAULTS = {
    "store_dir": "corpus",
    "threads_dir": "threads",
    "log_path": "annotations.log",
    "port": 8000,
    "min_retweets": 100,
    "keywords": None,
    "languages": None,
    "exclude_replies": True,
    "exclude_retweets": True,
    "trim_fraction": 0.05,
    "session_gap": 600.0,
}


class UsageError(Exception):
    pass


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        loaded = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    unknown = set(loaded) - set(DEFAULTS)
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    return loaded


def _effective(args: argparse.Namespace, keys: list[str]) -> dict:
    """flags > config file > defaults, echoed to stderr."""
    file_values = _load_config(getattr(args, "config", None))
    config = {}
    for key in keys:
        flag = getattr(args, key, None)
        if flag is not None:
            config[key] = flag
        elif key in file_values:
            config[key] = file_values[key]
        else:
            config[key] = DEFAULTS[key]
    print(f"config: {canonical_json({'command': args.command, **config})}", file=sys.stderr)
    return config


def _csv(value: str | None) -> list[str] | None:
    if value is None:
        return None
    items = [item.strip() for item in value.split(",") if item.strip()]
    return items or None


def _emit(payload: dict | list) -> None:
    print(canonical_json(payload, pretty=True))


# -- handlers -------------------------------------------------------------------


def cmd_ingest(args) -> int:
    config = _effective(args, ["store_dir", "keywords", "languages"])
    keywords = _csv(args.keywords if args.keywords is not None else config["keywords"]) or []
    languages = _csv(args.languages if args.languages is not None else config["languages"])
    date_range = None
    if (args.date_from is None) != (args.date_to is None):
        raise UsageError("--from and --to must be given together")
    if args.date_from is not None:
        date_range = (parse_timestamp(args.date_from), parse_timestamp(args.date_to))
    filt = IngestFilter(
        keywords=keywords,
        languages=frozenset(l.lower() for l in languages) if languages else None,
        date_range=date_range,
    )
    store = CorpusStore.open_or_create(config["store_dir"])
    try:
        stats = ingest_paths(args.input, filt, store)
    except StorageError as exc:
        partial = getattr(exc, "stats", None)
        _emit({"error": str(exc), "partial_stats": partial.as_dict() if partial else None})
        raise
    _emit(stats.as_dict())
    return 0


def cmd_distribution(args) -> int:
    config = _effective(args, ["store_dir"])
    store = CorpusStore.open(config["store_dir"])
    extra = [int(t) for t in (_csv(args.thresholds) or [])]
    dist = compute_distribution(store, extra_thresholds=extra)
    payload = dist.as_dict()
    if args.out:
        Path(args.out).write_text(canonical_json(payload, pretty=True) + "\n", encoding="utf-8")
    _emit(payload)
    return 0


def _plan(args, config) -> SamplePlan:
    languages = _csv(args.languages if getattr(args, "languages", None) is not None else config.get("languages"))
    return SamplePlan(
        min_retweets=config["min_retweets"],
        languages=frozenset(l.lower() for l in languages) if languages else None,
        exclude_replies=config["exclude_replies"],
        exclude_retweets=config["exclude_retweets"],
    )


def cmd_sample(args) -> int:
    config = _effective(args, ["store_dir", "min_retweets", "languages", "exclude_replies", "exclude_retweets"])
    store = CorpusStore.open(config["store_dir"])
    sampled = sample_sources(store, _plan(args, config))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            for record in sampled:
                fh.write(record_to_line(record) + "\n")
    _emit({"sampled": len(sampled), "out": args.out})
    return 0


def cmd_threads(args) -> int:
    config = _effective(args, ["store_dir", "threads_dir"])
    store = CorpusStore.open(config["store_dir"])
    sources = []
    with open(args.sample, "rb") as fh:
        for line in fh:
            if line.strip():
                sources.append(parse_record(line))
    built, stats = build_all(sources, corpus_reply_provider(store), max_depth=args.max_depth)
    out_dir = Path(config["threads_dir"])
    for thread in built:
        write_thread(thread, out_dir)
    _emit(stats.as_dict())
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    config = _effective(args, ["threads_dir", "log_path", "port", "store_dir"])
    dataset = Dataset.load(config["threads_dir"], config["log_path"], tokens_path=args.tokens)
    app = create_app(dataset)
    if args.ui:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=args.ui, html=True), name="ui")
    uvicorn.run(app, host=args.host, port=config["port"], log_level="warning")
    return 0


def cmd_report(args) -> int:
    config = _effective(args, ["threads_dir", "log_path", "trim_fraction", "session_gap"])
    threads = read_threads_dir(config["threads_dir"])
    store = AnnotationStore.replay(load_events(config["log_path"]), [t.source.id for t in threads])
    payload = build_report(
        threads,
        store,
        trim_fraction=config["trim_fraction"],
        session_gap=config["session_gap"],
    )
    text = canonical_json(payload, pretty=True) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    if args.day_table_csv:
        Path(args.day_table_csv).write_text(day_table_csv(day_table(threads, store)), encoding="utf-8")
    print(text, end="")
    return 0


def cmd_export(args) -> int:
    config = _effective(args, ["threads_dir", "log_path"])
    threads = read_threads_dir(config["threads_dir"])
    store = AnnotationStore.replay(load_events(config["log_path"]), [t.source.id for t in threads])
    bundle = Dataset(threads, store).export_bundle()
    if args.out:
        Path(args.out).write_text(canonical_json(bundle, pretty=True) + "\n", encoding="utf-8")
        _emit({"out": args.out, "threads": len(bundle["threads"]), "events": len(bundle["events"])})
    else:
        _emit(bundle)
    return 0


def cmd_import(args) -> int:
    config = _effective(args, ["threads_dir", "log_path"])
    bundle = json.loads(Path(args.bundle).read_text(encoding="utf-8"))
    summary = import_bundle(bundle, config["threads_dir"], config["log_path"])
    _emit(summary)
    return 0


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rumourkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file; flags override its values")

    p = sub.add_parser("ingest", help="filter and persist JSONL archives into a corpus store")
    common(p)
    p.add_argument("--input", nargs="+", required=True, help="JSONL archive files")
    p.add_argument("--keywords", help="comma-separated keywords (case-insensitive substrings)")
    p.add_argument("--languages", help="comma-separated ISO language codes to keep")
    p.add_argument("--from", dest="date_from", help="ISO start of kept window (inclusive)")
    p.add_argument("--to", dest="date_to", help="ISO end of kept window (exclusive)")
    p.add_argument("--store", dest="store_dir", help="corpus store directory")
    p.set_defaults(handler=cmd_ingest)

    p = sub.add_parser("distribution", help="retweet-count histogram and CCDF")
    common(p)
    p.add_argument("--store", dest="store_dir")
    p.add_argument("--thresholds", help="extra CCDF thresholds, comma-separated")
    p.add_argument("--out", help="write distribution JSON here as well")
    p.set_defaults(handler=cmd_distribution)

    p = sub.add_parser("sample", help="select high-retweet source tweets")
    common(p)
    p.add_argument("--store", dest="store_dir")
    p.add_argument("--min-retweets", dest="min_retweets", type=int)
    p.add_argument("--languages")
    p.add_argument("--exclude-replies", dest="exclude_replies", action=argparse.BooleanOptionalAction)
    p.add_argument("--exclude-retweets", dest="exclude_retweets", action=argparse.BooleanOptionalAction)
    p.add_argument("--out", help="write sampled records as JSONL")
    p.set_defaults(handler=cmd_sample)

    p = sub.add_parser("threads", help="reconstruct reply conversations for sampled sources")
    common(p)
    p.add_argument("--store", dest="store_dir")
    p.add_argument("--sample", required=True, help="sample.jsonl from the sample step")
    p.add_argument("--out", dest="threads_dir", help="directory for thread documents")
    p.add_argument("--max-depth", dest="max_depth", type=int)
    p.set_defaults(handler=cmd_threads)

    p = sub.add_parser("serve", help="run the annotation HTTP API")
    common(p)
    p.add_argument("--port", type=int)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--store", dest="store_dir", help="corpus store (not required to serve)")
    p.add_argument("--threads-dir", dest="threads_dir")
    p.add_argument("--log", dest="log_path")
    p.add_argument("--tokens", help="JSON file mapping annotator tokens to ids")
    p.add_argument("--ui", help="static directory to serve at / (the browser annotator)")
    p.set_defaults(handler=cmd_serve)

    p = sub.add_parser("report", help="compute the summary analytics")
    common(p)
    p.add_argument("--threads-dir", dest="threads_dir")
    p.add_argument("--log", dest="log_path")
    p.add_argument("--out", help="write report JSON here as well")
    p.add_argument("--trim", dest="trim_fraction", type=float)
    p.add_argument("--session-gap", dest="session_gap", type=float)
    p.add_argument("--day-table-csv", dest="day_table_csv", help="also emit the day table as CSV")
    p.set_defaults(handler=cmd_report)

    p = sub.add_parser("export", help="bundle threads + annotations + stories as one JSON document")
    common(p)
    p.add_argument("--threads-dir", dest="threads_dir")
    p.add_argument("--log", dest="log_path")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_export)

    p = sub.add_parser("import", help="materialise an export bundle as a servable dataset")
    common(p)
    p.add_argument("--bundle", required=True)
    p.add_argument("--threads-dir", dest="threads_dir")
    p.add_argument("--log", dest="log_path")
    p.set_defaults(handler=cmd_import)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failures -> exit 1 with a diagnostic
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
