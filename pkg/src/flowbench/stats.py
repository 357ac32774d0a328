"""Descriptive statistics and chart series over event logs: summaries,
frequency tables, over-time series, per-case distributions, variants,
dotted charts, and the log-quality report.

Everything here is a pure function of an immutable log; results carry raw
millisecond values, with human-readable duration labels layered on top.
"""

from __future__ import annotations

import statistics
from collections import Counter
from dataclasses import dataclass, field

from .ingest import IngestReport
from .model import (
    MISSING_LABEL,
    MS_PER_DAY,
    MS_PER_HOUR,
    MS_PER_MINUTE,
    MS_PER_MONTH,
    MS_PER_SECOND,
    MS_PER_WEEK,
    MS_PER_YEAR,
    EventLog,
    ms_to_datetime,
)


class UnknownCategoryError(KeyError):
    def __init__(self, key: str):
        super().__init__(key)
        self.key = key

    def __str__(self) -> str:
        return f"no such dot category: {self.key!r}"


def _fmt_quantity(value: float) -> str:
    rounded = round(value, 1)
    if rounded == int(rounded):
        return str(int(rounded))
    return f"{rounded}"


# Unit cut-overs chosen to reproduce the label style of Disco-like tools:
# durations stay in days below a month, in weeks below half a year, in
# months below four years.
_BANDS = (
    (MS_PER_SECOND, 60, "second", "seconds"),
    (MS_PER_MINUTE, 60, "minute", "minutes"),
    (MS_PER_HOUR, 24, "hour", "hours"),
    (MS_PER_DAY, 30, "day", "days"),
    (MS_PER_WEEK, 26, "week", "weeks"),
    (MS_PER_MONTH, 48, "month", "months"),
    (MS_PER_YEAR, 1000, "year", "years"),
)


def humanize_ms(ms: float) -> str:
    """Human-readable duration ("28.6 days", "46.5 months"), 1 dp."""
    ms = max(0.0, float(ms))
    if ms < MS_PER_SECOND:
        n = int(ms)
        return f"{n} millisecond" if n == 1 else f"{n} milliseconds"
    for unit_ms, limit, singular, plural in _BANDS:
        value = ms / unit_ms
        if value < limit:
            label = _fmt_quantity(value)
            return f"{label} {singular}" if label == "1" else f"{label} {plural}"
    value = ms / MS_PER_YEAR / 1000
    return f"{_fmt_quantity(value)} thousand years"


@dataclass(frozen=True)
class DurationStats:
    mean: float = 0.0
    median: float = 0.0
    min: float = 0.0
    max: float = 0.0

    def to_dict(self) -> dict:
        return {
            "mean_ms": self.mean,
            "median_ms": self.median,
            "min_ms": self.min,
            "max_ms": self.max,
            "mean": humanize_ms(self.mean),
            "median": humanize_ms(self.median),
            "min": humanize_ms(self.min),
            "max": humanize_ms(self.max),
        }


def duration_stats(values: list[float]) -> DurationStats:
    if not values:
        return DurationStats()
    return DurationStats(
        mean=statistics.fmean(values),
        median=statistics.median(values),
        min=min(values),
        max=max(values),
    )


@dataclass(frozen=True)
class LogSummary:
    events: int
    cases: int
    activities: int
    resources: int
    first_ts: int | None
    last_ts: int | None
    duration_stats: DurationStats

    def to_dict(self) -> dict:
        return {
            "events": self.events,
            "cases": self.cases,
            "activities": self.activities,
            "resources": self.resources,
            "first_ts": self.first_ts,
            "last_ts": self.last_ts,
            "case_duration": self.duration_stats.to_dict(),
        }


def summarize(log: EventLog) -> LogSummary:
    if not log.cases:
        return LogSummary(0, 0, 0, 0, None, None, DurationStats())
    starts = [c.first_start() for c in log.cases if c.events]
    ends = [c.span_end() for c in log.cases if c.events]
    durations = [float(c.duration_ms()) for c in log.cases if c.events]
    return LogSummary(
        events=log.event_count(),
        cases=log.case_count(),
        activities=len(log.activities()),
        resources=len(log.resources()),
        first_ts=min(starts) if starts else None,
        last_ts=max(ends) if ends else None,
        duration_stats=duration_stats(durations),
    )


@dataclass(frozen=True)
class FrequencyRow:
    label: str
    absolute: int
    relative: float

    def to_dict(self) -> dict:
        return {"label": self.label, "absolute": self.absolute, "relative": self.relative}


def frequency_table(log: EventLog, dimension: str = "activity") -> list[FrequencyRow]:
    """Rows sorted by absolute count descending; relative is a fraction of
    total events. Missing resources appear under the "NA" label."""
    if dimension not in ("activity", "resource"):
        raise ValueError(f"unknown frequency dimension {dimension!r}")
    counts: Counter[str] = Counter()
    for _case, event in log.iter_events():
        if dimension == "activity":
            counts[event.activity] += 1
        else:
            counts[event.resource if event.resource is not None else MISSING_LABEL] += 1
    total = sum(counts.values())
    rows = [
        FrequencyRow(label=label, absolute=n, relative=n / total)
        for label, n in counts.items()
    ]
    rows.sort(key=lambda r: (-r.absolute, r.label))
    return rows


def _bucket_key(ms: int, bucket: str) -> str:
    dt = ms_to_datetime(ms)
    if bucket == "month":
        return f"{dt.year:04d}-{dt.month:02d}"
    if bucket == "week":
        iso = dt.isocalendar()
        return f"{iso[0]:04d}-W{iso[1]:02d}"
    if bucket == "day":
        return f"{dt.year:04d}-{dt.month:02d}-{dt.day:02d}"
    raise ValueError(f"unknown bucket {bucket!r}")


def _buckets_covered(start_ms: int, end_ms: int, bucket: str) -> set[str]:
    keys = {_bucket_key(start_ms, bucket)}
    step = MS_PER_DAY if bucket == "day" else MS_PER_WEEK if bucket == "week" else None
    if step is None:  # months vary in length; walk day by day
        step = MS_PER_DAY
    ms = start_ms
    while ms < end_ms:
        ms = min(ms + step, end_ms)
        keys.add(_bucket_key(ms, bucket))
    return keys


@dataclass(frozen=True)
class SeriesPoint:
    bucket: str
    count: int

    def to_dict(self) -> dict:
        return {"bucket": self.bucket, "count": self.count}


def over_time(
    log: EventLog, unit: str = "events", bucket: str = "month", active_cases: bool = False
) -> list[SeriesPoint]:
    """Events bucket by event start; cases bucket by case first-event start.

    active_cases (cases unit only) instead counts a case in every bucket its
    span covers, so the series total can exceed the case count.
    """
    if unit not in ("events", "cases"):
        raise ValueError(f"unknown unit {unit!r}")
    counts: Counter[str] = Counter()
    if unit == "events":
        for _case, event in log.iter_events():
            counts[_bucket_key(event.start_ts, bucket)] += 1
    elif active_cases:
        for case in log.cases:
            if case.events:
                for key in _buckets_covered(case.first_start(), case.span_end(), bucket):
                    counts[key] += 1
    else:
        for case in log.cases:
            if case.events:
                counts[_bucket_key(case.first_start(), bucket)] += 1
    return [SeriesPoint(bucket=k, count=counts[k]) for k in sorted(counts)]


@dataclass(frozen=True)
class PerCaseDistribution:
    events_per_case: dict[int, int]
    event_classes_per_case: dict[int, int]

    def _mean(self, histogram: dict[int, int]) -> float:
        total = sum(histogram.values())
        if total == 0:
            return 0.0
        return sum(k * v for k, v in histogram.items()) / total

    @property
    def mean_events(self) -> float:
        return self._mean(self.events_per_case)

    @property
    def max_events(self) -> int:
        return max(self.events_per_case, default=0)

    @property
    def mean_classes(self) -> float:
        return self._mean(self.event_classes_per_case)

    @property
    def max_classes(self) -> int:
        return max(self.event_classes_per_case, default=0)

    def to_dict(self) -> dict:
        return {
            "events_per_case": {str(k): v for k, v in sorted(self.events_per_case.items())},
            "event_classes_per_case": {
                str(k): v for k, v in sorted(self.event_classes_per_case.items())
            },
            "mean_events": self.mean_events,
            "max_events": self.max_events,
            "mean_event_classes": self.mean_classes,
            "max_event_classes": self.max_classes,
        }


def per_case_distribution(log: EventLog) -> PerCaseDistribution:
    events_hist: Counter[int] = Counter()
    classes_hist: Counter[int] = Counter()
    for case in log.cases:
        events_hist[len(case.events)] += 1
        classes_hist[len(set(case.activity_sequence()))] += 1
    return PerCaseDistribution(dict(events_hist), dict(classes_hist))


@dataclass(frozen=True)
class Variant:
    sequence: tuple[str, ...]
    case_count: int
    cumulative_coverage: float

    def to_dict(self) -> dict:
        return {
            "sequence": list(self.sequence),
            "case_count": self.case_count,
            "cumulative_coverage": self.cumulative_coverage,
        }


def variants(log: EventLog) -> list[Variant]:
    """Cases grouped by exact activity sequence, most common first."""
    groups: Counter[tuple[str, ...]] = Counter()
    for case in log.cases:
        groups[case.activity_sequence()] += 1
    if not groups:
        return []
    total = sum(groups.values())
    ordered = sorted(groups.items(), key=lambda item: (-item[1], item[0]))
    out = []
    running = 0
    for sequence, count in ordered:
        running += count
        out.append(Variant(sequence=sequence, case_count=count, cumulative_coverage=running / total))
    return out


@dataclass(frozen=True)
class DotPoint:
    row_index: int
    x: int
    category: str

    def to_dict(self) -> dict:
        return {"row_index": self.row_index, "x": self.x, "category": self.category}


@dataclass(frozen=True)
class DottedChart:
    rows: tuple[str, ...]
    points: tuple[DotPoint, ...]
    x_mode: str
    category: str

    def to_dict(self) -> dict:
        return {
            "rows": list(self.rows),
            "points": [p.to_dict() for p in self.points],
            "x_mode": self.x_mode,
            "category": self.category,
        }


def _dot_category(event, key: str) -> str:
    if key == "activity":
        return event.activity
    if key == "resource":
        return event.resource if event.resource is not None else MISSING_LABEL
    value = event.attributes.get(key)
    return str(value) if value is not None else MISSING_LABEL


def dotted_chart(
    log: EventLog,
    x_mode: str = "absolute",
    sort: str = "first_event_time",
    category: str = "activity",
) -> DottedChart:
    """One point per event; rows are cases under the chosen sort key."""
    if x_mode not in ("absolute", "relative"):
        raise ValueError(f"unknown x_mode {x_mode!r}")
    if sort not in ("first_event_time", "duration"):
        raise ValueError(f"unknown sort {sort!r}")
    if category not in ("activity", "resource"):
        if not any(category in e.attributes for _c, e in log.iter_events()):
            raise UnknownCategoryError(category)

    cases = [c for c in log.cases if c.events]
    if sort == "first_event_time":
        cases.sort(key=lambda c: (c.first_start(), c.case_id))
    else:
        cases.sort(key=lambda c: (-c.duration_ms(), c.first_start(), c.case_id))

    points: list[DotPoint] = []
    for row_index, case in enumerate(cases):
        base = case.first_start()
        for event in case.events:
            x = event.start_ts if x_mode == "absolute" else event.start_ts - base
            points.append(DotPoint(row_index=row_index, x=x, category=_dot_category(event, category)))
    return DottedChart(
        rows=tuple(c.case_id for c in cases),
        points=tuple(points),
        x_mode=x_mode,
        category=category,
    )


@dataclass(frozen=True)
class QualityReport:
    missing_resource_rate: float
    missing_activity_part_rate: float
    unparsed_ts_count: int
    events_per_case: dict = field(default_factory=dict)
    event_classes_per_case: dict = field(default_factory=dict)
    maturity_band: int = 1

    def to_dict(self) -> dict:
        return {
            "missing_resource_rate": self.missing_resource_rate,
            "missing_activity_part_rate": self.missing_activity_part_rate,
            "unparsed_ts_count": self.unparsed_ts_count,
            "events_per_case": self.events_per_case,
            "event_classes_per_case": self.event_classes_per_case,
            "maturity_band": self.maturity_band,
        }


def _has_missing_part(activity: str, separator: str) -> bool:
    return MISSING_LABEL in activity.split(separator)


def quality_report(log: EventLog, ingest: IngestReport | None = None) -> QualityReport:
    """Measurable quality heuristic.

    The maturity band is an auditable proxy, not an ontology judgement:
    band 5 is never assigned automatically; band 4 needs zero missing core
    fields plus multi-event cases; bands 3/2/1 follow the worst missing-core
    rate at the 5% / 25% cuts.
    """
    total = log.event_count()
    missing_resource = 0
    missing_part = 0
    multi_event = False
    for case in log.cases:
        if len(case.events) > 1:
            multi_event = True
        for event in case.events:
            if event.resource is None:
                missing_resource += 1
            if _has_missing_part(event.activity, log.classifier.separator):
                missing_part += 1
    resource_rate = missing_resource / total if total else 0.0
    part_rate = missing_part / total if total else 0.0
    unparsed = ingest.unparsed_timestamps if ingest else 0
    rows_read = ingest.rows_read if ingest else 0
    unparsed_rate = unparsed / rows_read if rows_read else 0.0

    worst = max(resource_rate, part_rate, unparsed_rate)
    if worst == 0.0 and multi_event:
        band = 4
    elif worst <= 0.05:
        band = 3
    elif worst <= 0.25:
        band = 2
    else:
        band = 1

    dist = per_case_distribution(log)
    return QualityReport(
        missing_resource_rate=resource_rate,
        missing_activity_part_rate=part_rate,
        unparsed_ts_count=unparsed,
        events_per_case={"mean": dist.mean_events, "max": dist.max_events},
        event_classes_per_case={"mean": dist.mean_classes, "max": dist.max_classes},
        maturity_band=band,
    )
