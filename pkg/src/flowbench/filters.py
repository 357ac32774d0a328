"""Declarative log filtering: the five timeframe modes, attribute and
case-duration filters, year-range trimming, and pipeline composition.

Filters never fail; they may return empty logs. Application is pure and
idempotent, and a pipeline equals sequential application of its parts.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import datetime
from typing import Union

from .model import Case, EventLog, TimeRange, ts_to_ms

TIMEFRAME_MODES = ("contained_in", "intersecting", "started_in", "completed_in", "trim")


@dataclass(frozen=True)
class TimeframeFilter:
    range: TimeRange
    mode: str = "intersecting"

    def __post_init__(self) -> None:
        if self.mode not in TIMEFRAME_MODES:
            raise ValueError(f"unknown timeframe mode {self.mode!r}")

    def to_dict(self) -> dict:
        return {"type": "timeframe", "mode": self.mode, "start": self.range.start, "end": self.range.end}


@dataclass(frozen=True)
class AttributeFilter:
    """Keep by attribute value; key may be "activity", "resource", or an
    event attribute key. Case scope keeps whole cases with a match, event
    scope keeps only matching events."""

    key: str
    values: frozenset[str]
    scope: str = "case"

    def __post_init__(self) -> None:
        if self.scope not in ("case", "event"):
            raise ValueError(f"unknown attribute scope {self.scope!r}")

    def to_dict(self) -> dict:
        return {
            "type": "attribute",
            "key": self.key,
            "values": sorted(self.values),
            "scope": self.scope,
        }


@dataclass(frozen=True)
class DurationFilter:
    min_ms: int = 0
    max_ms: int | None = None

    def __post_init__(self) -> None:
        if self.max_ms is not None and self.min_ms > self.max_ms:
            raise ValueError("duration filter min exceeds max")

    def to_dict(self) -> dict:
        return {"type": "duration", "min_ms": self.min_ms, "max_ms": self.max_ms}


@dataclass(frozen=True)
class YearRangeFilter:
    first: int
    last: int

    def __post_init__(self) -> None:
        if self.first > self.last:
            raise ValueError("year range first exceeds last")

    def to_dict(self) -> dict:
        return {"type": "year_range", "first": self.first, "last": self.last}


FilterSpec = Union[TimeframeFilter, AttributeFilter, DurationFilter, YearRangeFilter]


def spec_from_dict(cfg: dict) -> FilterSpec:
    kind = cfg.get("type")
    if kind == "timeframe":
        return TimeframeFilter(
            range=TimeRange(start=int(cfg["start"]), end=int(cfg["end"])),
            mode=cfg.get("mode", "intersecting"),
        )
    if kind == "attribute":
        return AttributeFilter(
            key=cfg["key"],
            values=frozenset(str(v) for v in cfg["values"]),
            scope=cfg.get("scope", "case"),
        )
    if kind == "duration":
        max_ms = cfg.get("max_ms")
        return DurationFilter(min_ms=int(cfg.get("min_ms", 0)), max_ms=None if max_ms is None else int(max_ms))
    if kind == "year_range":
        return YearRangeFilter(first=int(cfg["first"]), last=int(cfg["last"]))
    raise ValueError(f"unknown filter type {kind!r}")


def year_range_to_timerange(spec: YearRangeFilter) -> TimeRange:
    start = ts_to_ms(datetime(spec.first, 1, 1))
    end = ts_to_ms(datetime(spec.last, 12, 31, 23, 59, 59)) + 999
    return TimeRange(start=start, end=end)


def _with_cases(log: EventLog, cases: list[Case]) -> EventLog:
    return replace(log, cases=tuple(cases))


def _event_value(event, key: str) -> str | None:
    if key == "activity":
        return event.activity
    if key == "resource":
        return event.resource
    value = event.attributes.get(key)
    return None if value is None else str(value)


def _apply_timeframe(log: EventLog, window: TimeRange, mode: str) -> EventLog:
    kept: list[Case] = []
    for case in log.cases:
        if not case.events:
            continue
        span_start = case.first_start()
        span_end = case.span_end()
        if mode == "contained_in":
            if window.contains(span_start) and window.contains(span_end):
                kept.append(case)
        elif mode == "intersecting":
            if window.overlaps(span_start, span_end):
                kept.append(case)
        elif mode == "started_in":
            if window.contains(span_start):
                kept.append(case)
        elif mode == "completed_in":
            if window.contains(span_end):
                kept.append(case)
        else:  # trim: membership tests event starts only
            events = tuple(e for e in case.events if window.contains(e.start_ts))
            if events:
                kept.append(replace(case, events=events))
    return _with_cases(log, kept)


def _apply_attribute(log: EventLog, spec: AttributeFilter) -> EventLog:
    kept: list[Case] = []
    for case in log.cases:
        matches = [e for e in case.events if _event_value(e, spec.key) in spec.values]
        if spec.scope == "case":
            if matches:
                kept.append(case)
        else:
            if matches:
                kept.append(replace(case, events=tuple(matches)))
    return _with_cases(log, kept)


def apply_filter(log: EventLog, spec: FilterSpec) -> EventLog:
    if isinstance(spec, TimeframeFilter):
        return _apply_timeframe(log, spec.range, spec.mode)
    if isinstance(spec, AttributeFilter):
        return _apply_attribute(log, spec)
    if isinstance(spec, DurationFilter):
        kept = [
            c
            for c in log.cases
            if c.events
            and c.duration_ms() >= spec.min_ms
            and (spec.max_ms is None or c.duration_ms() <= spec.max_ms)
        ]
        return _with_cases(log, kept)
    if isinstance(spec, YearRangeFilter):
        return _apply_timeframe(log, year_range_to_timerange(spec), "trim")
    raise TypeError(f"not a filter spec: {spec!r}")


@dataclass(frozen=True)
class Pipeline:
    """Left-to-right filter composition."""

    specs: tuple[FilterSpec, ...] = ()

    def apply(self, log: EventLog) -> EventLog:
        for spec in self.specs:
            log = apply_filter(log, spec)
        return log

    def to_list(self) -> list[dict]:
        return [spec.to_dict() for spec in self.specs]


def compose(specs: list[FilterSpec]) -> Pipeline:
    return Pipeline(specs=tuple(specs))


def pipeline_from_list(items: list[dict]) -> Pipeline:
    return Pipeline(specs=tuple(spec_from_dict(item) for item in items))
