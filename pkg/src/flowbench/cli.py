"""Command-line front end. Thin shell over the library: every subcommand
prints the same machine-readable output a library call would produce.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import discover, social, stats
from .exports import MetricMismatchError, dotted_chart_csv, export_dot
from .filters import pipeline_from_list
from .ingest import (
    ColumnMapping,
    MissingColumnError,
    MissingPolicy,
    JoinSpec,
    anonymize,
    join_tables,
    load_table,
    parse_csv,
    table_to_csv,
    write_anonymization_map,
)
from .replay import replay_stream
from .server import serve
from .store import SessionStore
from .stats import UnknownCategoryError
from .xes import XesParseError, export_xes, import_xes

USAGE_EXIT = 1
DATA_EXIT = 2


class CliError(Exception):
    """Data-level failure; message goes to stderr, exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit 2; the contract is 1
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(USAGE_EXIT)


def _read_json(path: str) -> dict | list:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise CliError(f"{path} is not valid JSON: {exc}")


def _read_bytes(path: str) -> bytes:
    try:
        with open(path, "rb") as handle:
            return handle.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}")


def _load_log(path: str, config_path: str | None = None):
    if path.endswith(".csv"):
        if not config_path:
            raise CliError(f"{path}: CSV input needs --config with a column mapping")
        cfg = _read_json(config_path)
        mapping = ColumnMapping.from_dict(cfg["mapping"])
        policy = MissingPolicy(mode=cfg.get("policy", "keep_as_na"))
        log, _report = parse_csv(_read_bytes(path), mapping, policy, name=cfg.get("name", path))
        return log
    try:
        return import_xes(_read_bytes(path))
    except XesParseError as exc:
        raise CliError(f"{path}: {exc}")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _emit_bytes(data: bytes, out: str | None) -> None:
    if out:
        with open(out, "wb") as handle:
            handle.write(data)
    else:
        sys.stdout.buffer.write(data)


def _json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False)


def build_parser() -> _Parser:
    parser = _Parser(prog="flowbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="CSV -> XES event log")
    p.add_argument("--csv", required=True)
    p.add_argument("--config", required=True, help="JSON with mapping/policy/name")
    p.add_argument("--out", required=True, help="XES output path")
    p.add_argument("--report", help="write the ingest report JSON here")

    p = sub.add_parser("join", help="left-outer join CSV tables")
    p.add_argument("--table", action="append", required=True, metavar="NAME=PATH")
    p.add_argument("--spec", required=True, help="JSON join spec")
    p.add_argument("--out")

    p = sub.add_parser("anonymize", help="pseudonymize resources")
    p.add_argument("--log", required=True)
    p.add_argument("--config")
    p.add_argument("--out", required=True)
    p.add_argument("--map-out", help="persist the mapping CSV (mode 0600)")

    p = sub.add_parser("stats", help="summaries, tables and chart series")
    p.add_argument("--log", required=True)
    p.add_argument("--config")
    p.add_argument(
        "--what",
        default="summary",
        choices=["summary", "frequency", "overtime", "variants", "distribution", "quality", "dotted"],
    )
    p.add_argument("--dim", default="activity", choices=["activity", "resource"])
    p.add_argument("--unit", default="events", choices=["events", "cases"])
    p.add_argument("--bucket", default="month", choices=["month", "week", "day"])
    p.add_argument("--x", default="absolute", choices=["absolute", "relative"])
    p.add_argument("--sort", default="first_event_time", choices=["first_event_time", "duration"])
    p.add_argument("--cat", default="activity")
    p.add_argument("--format", default="json", choices=["json", "csv"])
    p.add_argument("--out")

    p = sub.add_parser("dfg", help="directly-follows process map")
    p.add_argument("--log", required=True)
    p.add_argument("--config")
    p.add_argument("--activities", type=float, default=1.0)
    p.add_argument("--paths", type=float, default=1.0)
    p.add_argument(
        "--metric", default="frequency", choices=["frequency", "mean_duration", "total_duration"]
    )
    p.add_argument("--dot", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("alpha", help="Alpha-miner Petri net")
    p.add_argument("--log", required=True)
    p.add_argument("--config")
    p.add_argument("--dot", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("deps", help="causal dependency matrix")
    p.add_argument("--log", required=True)
    p.add_argument("--config")
    p.add_argument("--out")

    p = sub.add_parser("social", help="resource social networks")
    p.add_argument("--log", required=True)
    p.add_argument("--config")
    p.add_argument(
        "--kind", default="handover", choices=["handover", "subcontract", "working_together"]
    )
    p.add_argument("--metric", default="joint_cases", choices=["joint_cases", "jaccard"])
    p.add_argument("--bands", type=int, default=5)
    p.add_argument("--dot", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("filter", help="apply a filter pipeline, write the new log")
    p.add_argument("--log", required=True)
    p.add_argument("--config")
    p.add_argument("--pipeline", help="JSON file with a list of filter specs")
    p.add_argument(
        "--filter",
        action="append",
        default=[],
        dest="filters",
        metavar="JSON",
        help="inline filter spec, repeatable; applied after --pipeline",
    )
    p.add_argument("--out", required=True)

    p = sub.add_parser("export", help="export an object as dot/json/csv")
    p.add_argument("--log", required=True)
    p.add_argument("--config")
    p.add_argument(
        "--object", default="dfg", choices=["dfg", "alpha", "social", "dotted", "deps", "replay"]
    )
    p.add_argument("--format", default="json", choices=["dot", "json", "csv"])
    p.add_argument("--metric")
    p.add_argument("--activities", type=float, default=1.0)
    p.add_argument("--paths", type=float, default=1.0)
    p.add_argument(
        "--kind", default="handover", choices=["handover", "subcontract", "working_together"]
    )
    p.add_argument("--x", default="absolute", choices=["absolute", "relative"])
    p.add_argument("--sort", default="first_event_time", choices=["first_event_time", "duration"])
    p.add_argument("--cat", default="activity")
    p.add_argument("--out")

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--bind", default=os.environ.get("FLOWBENCH_BIND", "127.0.0.1:8000"))
    p.add_argument("--log", action="append", default=[], help="preload snapshots (repeatable)")
    p.add_argument("--config")

    return parser


def _cmd_ingest(args) -> None:
    cfg = _read_json(args.config)
    mapping = ColumnMapping.from_dict(cfg["mapping"])
    policy = MissingPolicy(mode=cfg.get("policy", "keep_as_na"))
    log, report = parse_csv(_read_bytes(args.csv), mapping, policy, name=cfg.get("name", args.csv))
    _emit_bytes(export_xes(log), args.out)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as handle:
            json.dump(report.to_dict(), handle, indent=2)
    sys.stderr.write(
        f"{report.events_emitted} events in {log.case_count()} cases"
        f" ({report.events_dropped} rows dropped)\n"
    )


def _cmd_join(args) -> None:
    tables = {}
    for item in args.table:
        name, _, path = item.partition("=")
        if not path:
            raise CliError(f"--table wants NAME=PATH, got {item!r}")
        tables[name] = load_table(_read_bytes(path))
    spec = JoinSpec.from_dict(_read_json(args.spec))
    try:
        joined, report = join_tables(tables, spec)
    except KeyError as exc:
        raise CliError(f"join spec references unknown table: {exc}")
    _emit(table_to_csv(joined), args.out)
    for table, key in report.duplicate_keys:
        sys.stderr.write(f"duplicate join key in {table}: {key!r} (first match wins)\n")


def _cmd_anonymize(args) -> None:
    log = _load_log(args.log, args.config)
    anonymized, mapping = anonymize(log)
    _emit_bytes(export_xes(anonymized), args.out)
    if args.map_out:
        write_anonymization_map(mapping, args.map_out)


def _cmd_stats(args) -> None:
    log = _load_log(args.log, args.config)
    if args.what == "summary":
        doc = stats.summarize(log).to_dict()
    elif args.what == "frequency":
        doc = {"dimension": args.dim, "rows": [r.to_dict() for r in stats.frequency_table(log, args.dim)]}
    elif args.what == "overtime":
        doc = {
            "unit": args.unit,
            "bucket": args.bucket,
            "series": [p.to_dict() for p in stats.over_time(log, args.unit, args.bucket)],
        }
    elif args.what == "variants":
        doc = {"variants": [v.to_dict() for v in stats.variants(log)]}
    elif args.what == "distribution":
        doc = stats.per_case_distribution(log).to_dict()
    elif args.what == "quality":
        doc = stats.quality_report(log).to_dict()
    else:
        chart = stats.dotted_chart(log, x_mode=args.x, sort=args.sort, category=args.cat)
        if args.format == "csv":
            _emit(dotted_chart_csv(chart), args.out)
            return
        doc = chart.to_dict()
    _emit(_json(doc), args.out)


def _cmd_dfg(args) -> None:
    log = _load_log(args.log, args.config)
    graph = discover.simplify_dfg(discover.build_dfg(log), args.activities, args.paths)
    if args.dot:
        _emit(export_dot(graph, args.metric), args.out)
    else:
        _emit(_json({"metric": args.metric, **graph.to_dict()}), args.out)


def _cmd_alpha(args) -> None:
    log = _load_log(args.log, args.config)
    net = discover.alpha_miner(log)
    if args.dot:
        _emit(export_dot(net, "frequency"), args.out)
    else:
        _emit(_json(net.to_dict()), args.out)


def _cmd_deps(args) -> None:
    log = _load_log(args.log, args.config)
    _emit(_json(discover.dependency_matrix(log).to_dict()), args.out)


def _cmd_social(args) -> None:
    log = _load_log(args.log, args.config)
    if args.kind == "handover":
        net = social.handover(log)
    elif args.kind == "subcontract":
        net = social.subcontract(log)
    else:
        net = social.working_together(log, metric=args.metric)
    if args.dot:
        _emit(export_dot(net, "weight"), args.out)
    else:
        _emit(_json(net.to_dict(bands=args.bands)), args.out)


def _cmd_filter(args) -> None:
    log = _load_log(args.log, args.config)
    items: list = []
    if args.pipeline:
        from_file = _read_json(args.pipeline)
        if not isinstance(from_file, list):
            raise CliError(f"{args.pipeline}: expected a JSON list of filter specs")
        items.extend(from_file)
    for raw in args.filters:
        try:
            items.append(json.loads(raw))
        except json.JSONDecodeError as exc:
            raise CliError(f"--filter is not valid JSON: {exc}")
    if not items:
        raise CliError("nothing to apply: pass --pipeline and/or --filter")
    pipeline = pipeline_from_list(items)
    _emit_bytes(export_xes(pipeline.apply(log)), args.out)


def _cmd_export(args) -> None:
    log = _load_log(args.log, args.config)
    if args.object == "dfg":
        graph = discover.simplify_dfg(discover.build_dfg(log), args.activities, args.paths)
        if args.format == "dot":
            _emit(export_dot(graph, args.metric or "frequency"), args.out)
        else:
            _emit(_json(graph.to_dict()), args.out)
    elif args.object == "alpha":
        net = discover.alpha_miner(log)
        if args.format == "dot":
            _emit(export_dot(net, args.metric or "frequency"), args.out)
        else:
            _emit(_json(net.to_dict()), args.out)
    elif args.object == "social":
        if args.kind == "handover":
            net = social.handover(log)
        elif args.kind == "subcontract":
            net = social.subcontract(log)
        else:
            net = social.working_together(log)
        if args.format == "dot":
            _emit(export_dot(net, args.metric or "weight"), args.out)
        else:
            _emit(_json(net.to_dict()), args.out)
    elif args.object == "dotted":
        chart = stats.dotted_chart(log, x_mode=args.x, sort=args.sort, category=args.cat)
        if args.format == "csv":
            _emit(dotted_chart_csv(chart), args.out)
        else:
            _emit(_json(chart.to_dict()), args.out)
    elif args.object == "deps":
        _emit(_json(discover.dependency_matrix(log).to_dict()), args.out)
    elif args.object == "replay":
        _emit(_json(replay_stream(log).to_dict()), args.out)
    else:
        raise CliError(f"cannot export object {args.object!r} as {args.format!r}")


def _cmd_serve(args) -> None:
    store = SessionStore()
    for path in args.log:
        snap = store.put(_load_log(path, args.config))
        sys.stderr.write(f"loaded {path} as snapshot {snap.key}\n")
    serve(store, bind=args.bind)


_COMMANDS = {
    "ingest": _cmd_ingest,
    "join": _cmd_join,
    "anonymize": _cmd_anonymize,
    "stats": _cmd_stats,
    "dfg": _cmd_dfg,
    "alpha": _cmd_alpha,
    "deps": _cmd_deps,
    "social": _cmd_social,
    "filter": _cmd_filter,
    "export": _cmd_export,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_EXIT
    try:
        _COMMANDS[args.command](args)
    except CliError as exc:
        sys.stderr.write(f"flowbench: {exc}\n")
        return DATA_EXIT
    except (MissingColumnError, XesParseError, MetricMismatchError, UnknownCategoryError) as exc:
        sys.stderr.write(f"flowbench: {exc}\n")
        return DATA_EXIT
    except (KeyError, ValueError) as exc:
        sys.stderr.write(f"flowbench: {exc}\n")
        return DATA_EXIT
    except OSError as exc:
        sys.stderr.write(f"flowbench: {exc}\n")
        return DATA_EXIT
    return 0


if __name__ == "__main__":
    sys.exit(main())
