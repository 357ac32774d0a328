"""Build event logs from CSV exports: column mapping, multi-table joins,
missing-data policies, and resource anonymization.

Empty cells and the spreadsheet artifacts "NA"/"#N/A" are treated as missing
on read. Sparse attributes produce no attribute entry; classifiers render
absent parts as "NA".
"""

from __future__ import annotations

import csv
import io
import os
import re
from dataclasses import dataclass, field
from datetime import datetime

from .model import (
    Case,
    Classifier,
    Event,
    EventLog,
    classify_parts,
    sort_case_events,
    ts_to_ms,
)

MISSING_CELLS = {"", "NA", "#N/A", "N/A", "#NAME?"}

DEFAULT_TS_FORMATS = ("%Y/%m/%d %H:%M:%S", "%Y/%m/%d %H:%M", "%Y/%m/%d")


class MissingColumnError(KeyError):
    """A mapped column is absent from the CSV header."""

    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"mapped column not in header: {self.name!r}"


@dataclass(frozen=True)
class ColumnMapping:
    """Which CSV columns play which event-log roles."""

    case_id_col: str
    activity_cols: tuple[str, ...]
    start_ts_col: str
    complete_ts_col: str | None = None
    resource_col: str | None = None
    attr_cols: tuple[str, ...] = ()
    ts_formats: tuple[str, ...] = DEFAULT_TS_FORMATS

    def __post_init__(self) -> None:
        if not self.case_id_col or not self.activity_cols or not self.start_ts_col:
            raise ValueError("case_id_col, activity_cols and start_ts_col are required")
        if not self.ts_formats:
            raise ValueError("at least one timestamp format is required")

    @staticmethod
    def from_dict(cfg: dict) -> "ColumnMapping":
        return ColumnMapping(
            case_id_col=cfg["case_id_col"],
            activity_cols=tuple(cfg["activity_cols"]),
            start_ts_col=cfg["start_ts_col"],
            complete_ts_col=cfg.get("complete_ts_col"),
            resource_col=cfg.get("resource_col"),
            attr_cols=tuple(cfg.get("attr_cols", ())),
            ts_formats=tuple(cfg.get("ts_formats", DEFAULT_TS_FORMATS)),
        )


@dataclass(frozen=True)
class MissingPolicy:
    """What to do when an optional field is missing or unparsable.

    Required fields (case id, start timestamp) always drop the row when they
    fail; drop_case escalates that to the whole case ("omit trace on error").
    """

    mode: str = "keep_as_na"

    MODES = ("keep_as_na", "drop_event", "drop_case")

    def __post_init__(self) -> None:
        if self.mode not in self.MODES:
            raise ValueError(f"unknown policy mode {self.mode!r}")


@dataclass
class IngestReport:
    """Per-row accounting: rows_read = events_emitted + events_dropped."""

    rows_read: int = 0
    events_emitted: int = 0
    events_dropped: int = 0
    cases_dropped: int = 0
    negative_durations: int = 0
    unparsed_timestamps: int = 0
    anonymization_map: dict[str, str] | None = None

    def to_dict(self) -> dict:
        return {
            "rows_read": self.rows_read,
            "events_emitted": self.events_emitted,
            "events_dropped": self.events_dropped,
            "cases_dropped": self.cases_dropped,
            "negative_durations": self.negative_durations,
            "unparsed_timestamps": self.unparsed_timestamps,
        }


def _cell(row: dict, col: str) -> str | None:
    value = row.get(col)
    if value is None:
        return None
    value = value.strip()
    if value in MISSING_CELLS:
        return None
    return value


def parse_timestamp(text: str, formats: tuple[str, ...]) -> int | None:
    """First format that parses wins; None when all fail."""
    for fmt in formats:
        try:
            return ts_to_ms(datetime.strptime(text, fmt))
        except ValueError:
            continue
    return None


def parse_csv(
    source: bytes | str | io.IOBase,
    mapping: ColumnMapping,
    policy: MissingPolicy = MissingPolicy(),
    name: str = "log",
) -> tuple[EventLog, IngestReport]:
    """One event per surviving row, grouped by case id, cases sorted internally.

    Raises MissingColumnError when the header lacks a mapped column. All other
    problems are policy-handled and accounted for in the report.
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8-sig")
    elif isinstance(source, str):
        text = source
    else:
        raw = source.read()
        text = raw.decode("utf-8-sig") if isinstance(raw, bytes) else raw
    reader = csv.DictReader(io.StringIO(text))
    header = reader.fieldnames or []
    required = [mapping.case_id_col, mapping.start_ts_col, *mapping.activity_cols]
    if mapping.complete_ts_col:
        required.append(mapping.complete_ts_col)
    if mapping.resource_col:
        required.append(mapping.resource_col)
    required.extend(mapping.attr_cols)
    for col in required:
        if col not in header:
            raise MissingColumnError(col)

    classifier = Classifier(parts=mapping.activity_cols)
    report = IngestReport()
    events_by_case: dict[str, list[Event]] = {}
    poisoned_cases: set[str] = set()

    for index, row in enumerate(reader):
        report.rows_read += 1
        case_id = _cell(row, mapping.case_id_col)
        if case_id is None:
            report.events_dropped += 1
            continue

        start_text = _cell(row, mapping.start_ts_col)
        start_ms = parse_timestamp(start_text, mapping.ts_formats) if start_text else None
        if start_ms is None:
            report.unparsed_timestamps += 1
            report.events_dropped += 1
            if policy.mode == "drop_case":
                poisoned_cases.add(case_id)
            continue

        drop_row = False
        complete_ms: int | None = None
        if mapping.complete_ts_col:
            complete_text = _cell(row, mapping.complete_ts_col)
            if complete_text is not None:
                complete_ms = parse_timestamp(complete_text, mapping.ts_formats)
                if complete_ms is None:
                    report.unparsed_timestamps += 1
                    if policy.mode == "drop_event":
                        drop_row = True
                    elif policy.mode == "drop_case":
                        poisoned_cases.add(case_id)

        resource = None
        if mapping.resource_col:
            resource = _cell(row, mapping.resource_col)
            if resource is None and policy.mode == "drop_event":
                drop_row = True
            elif resource is None and policy.mode == "drop_case":
                poisoned_cases.add(case_id)

        attrs: dict[str, object] = {}
        for col in mapping.activity_cols:
            value = _cell(row, col)
            if value is not None:
                attrs[col] = value
            elif policy.mode == "drop_event":
                drop_row = True
            elif policy.mode == "drop_case":
                poisoned_cases.add(case_id)
        for col in mapping.attr_cols:
            value = _cell(row, col)
            if value is not None:
                attrs[col] = value

        if drop_row:
            report.events_dropped += 1
            continue

        event = Event(
            activity=classify_parts(attrs, classifier),
            start_ts=start_ms,
            complete_ts=complete_ms,
            resource=resource,
            source_index=index,
            attributes=attrs,
        )
        if event.has_negative_duration():
            report.negative_durations += 1
        events_by_case.setdefault(case_id, []).append(event)

    cases: list[Case] = []
    for case_id, events in events_by_case.items():
        if case_id in poisoned_cases:
            report.cases_dropped += 1
            report.events_dropped += len(events)
            continue
        cases.append(sort_case_events(Case(case_id=case_id, events=tuple(events))))
    report.cases_dropped += len(poisoned_cases - set(events_by_case))
    report.events_emitted = sum(len(c.events) for c in cases)

    log = EventLog(name=name, cases=tuple(cases), classifier=classifier)
    return log, report


@dataclass(frozen=True)
class JoinColumn:
    table: str
    base_key: str
    foreign_key: str
    projected_columns: tuple[str, ...]


@dataclass(frozen=True)
class JoinSpec:
    base_table: str
    joins: tuple[JoinColumn, ...]

    @staticmethod
    def from_dict(cfg: dict) -> "JoinSpec":
        return JoinSpec(
            base_table=cfg["base_table"],
            joins=tuple(
                JoinColumn(
                    table=j["table"],
                    base_key=j["base_key"],
                    foreign_key=j["foreign_key"],
                    projected_columns=tuple(j["projected_columns"]),
                )
                for j in cfg.get("joins", ())
            ),
        )


@dataclass
class JoinReport:
    duplicate_keys: list[tuple[str, str]] = field(default_factory=list)


@dataclass(frozen=True)
class Table:
    """A loaded CSV: header plus string rows."""

    header: tuple[str, ...]
    rows: tuple[dict, ...]


def load_table(source: bytes | str) -> Table:
    text = source.decode("utf-8-sig") if isinstance(source, bytes) else source
    reader = csv.DictReader(io.StringIO(text))
    rows = tuple(dict(r) for r in reader)
    return Table(header=tuple(reader.fieldnames or ()), rows=rows)


def join_tables(tables: dict[str, Table], spec: JoinSpec) -> tuple[Table, JoinReport]:
    """Left-outer join of lookup tables onto the base table.

    Keys are compared as strings (IDs, not numbers). Unmatched lookups yield
    "NA" in the projected columns; a repeated key in a lookup table is
    reported and the first match wins. Row count always equals the base.
    """
    base = tables[spec.base_table]
    report = JoinReport()
    lookups: dict[str, dict[str, dict]] = {}
    for join in spec.joins:
        table = tables[join.table]
        index: dict[str, dict] = {}
        for row in table.rows:
            key = (row.get(join.foreign_key) or "").strip()
            if key in index:
                report.duplicate_keys.append((join.table, key))
                continue
            index[key] = row
        lookups[join.table] = index

    header = list(base.header)
    for join in spec.joins:
        header.extend(c for c in join.projected_columns if c not in header)

    out_rows = []
    for row in base.rows:
        merged = dict(row)
        for join in spec.joins:
            key = (row.get(join.base_key) or "").strip()
            match = lookups[join.table].get(key)
            for col in join.projected_columns:
                if match is None:
                    merged[col] = "NA"
                else:
                    merged[col] = match.get(col, "NA")
        out_rows.append(merged)
    return Table(header=tuple(header), rows=tuple(out_rows)), report


def table_to_csv(table: Table) -> str:
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=list(table.header), lineterminator="\n")
    writer.writeheader()
    for row in table.rows:
        writer.writerow({k: row.get(k, "") for k in table.header})
    return out.getvalue()


_PSEUDONYM = re.compile(r"^staff_\d{2,}$")


def anonymize(log: EventLog, fieldname: str = "resource") -> tuple[EventLog, dict[str, str]]:
    """Replace resources with staff_NN pseudonyms in first-appearance order.

    NN is zero-padded to two digits. Idempotent: a log whose resources all
    already match the pseudonym pattern comes back unchanged with an identity
    mapping.
    """
    if fieldname != "resource":
        raise ValueError(f"unsupported anonymization field {fieldname!r}")
    originals: list[str] = []
    seen: set[str] = set()
    for _case, event in log.iter_events():
        if event.resource is not None and event.resource not in seen:
            seen.add(event.resource)
            originals.append(event.resource)
    if all(_PSEUDONYM.match(value) for value in originals):
        return log, {value: value for value in originals}

    mapping = {value: f"staff_{i + 1:02d}" for i, value in enumerate(originals)}
    cases = []
    for case in log.cases:
        events = tuple(
            Event(
                activity=e.activity,
                start_ts=e.start_ts,
                complete_ts=e.complete_ts,
                resource=mapping[e.resource] if e.resource is not None else None,
                source_index=e.source_index,
                attributes=e.attributes,
            )
            for e in case.events
        )
        cases.append(Case(case_id=case.case_id, events=events))
    return EventLog(
        name=log.name,
        cases=tuple(cases),
        classifier=log.classifier,
        global_attrs=log.global_attrs,
    ), mapping


def write_anonymization_map(mapping: dict[str, str], path: str) -> None:
    """Two-column CSV (original, pseudonym), file mode restricted to owner."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["original", "pseudonym"])
    for original, pseudonym in mapping.items():
        writer.writerow([original, pseudonym])
    fd = os.open(path, os.O_WRONLY | os.O_CREAT | os.O_TRUNC, 0o600)
    with os.fdopen(fd, "w") as handle:
        handle.write(out.getvalue())
