"""Core event-log model: events grouped into cases, activity classifiers,
canonical ordering, and structural validation.

Timestamps are epoch milliseconds with no timezone semantics (source data
carries naive local times). Logs and everything derived from them are
immutable after construction; transformations return new values.
"""

from __future__ import annotations

import calendar
from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta
from typing import Mapping, Union

MISSING_LABEL = "NA"

MS_PER_SECOND = 1000
MS_PER_MINUTE = 60 * MS_PER_SECOND
MS_PER_HOUR = 60 * MS_PER_MINUTE
MS_PER_DAY = 24 * MS_PER_HOUR
MS_PER_WEEK = 7 * MS_PER_DAY
MS_PER_MONTH = int(30.44 * MS_PER_DAY)
MS_PER_YEAR = int(365.25 * MS_PER_DAY)


class Timestamp(int):
    """Epoch-millisecond attribute value.

    A plain int subclass so timestamp-typed attributes survive
    serialization round trips distinctly from integer attributes.
    """

    __slots__ = ()

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Timestamp({int(self)})"


AttrValue = Union[str, int, float, bool, Timestamp]


def ts_to_ms(dt: datetime) -> int:
    """Naive datetime -> epoch ms (interpreted as UTC for determinism)."""
    return calendar.timegm(dt.timetuple()) * 1000 + dt.microsecond // 1000


def ms_to_datetime(ms: int) -> datetime:
    return datetime(1970, 1, 1) + timedelta(milliseconds=ms)


def format_ms(ms: int) -> str:
    """ISO-style rendering with millisecond precision, no zone."""
    dt = ms_to_datetime(ms)
    return dt.strftime("%Y-%m-%dT%H:%M:%S") + f".{ms % 1000:03d}"


def parse_iso_ms(text: str) -> int:
    dt = datetime.strptime(text, "%Y-%m-%dT%H:%M:%S.%f")
    return ts_to_ms(dt)


@dataclass(frozen=True)
class Event:
    """One recorded step: an activity executed at a time, optionally by someone.

    ``source_index`` is the 0-based row order in the original source and
    breaks ordering ties deterministically. A missing resource is None;
    presentation layers render it as "NA".
    """

    activity: str
    start_ts: int
    complete_ts: int | None = None
    resource: str | None = None
    source_index: int = 0
    attributes: Mapping[str, AttrValue] = field(default_factory=dict)

    def end_ts(self) -> int:
        """Span end: completion when present, else the start."""
        if self.complete_ts is None:
            return self.start_ts
        return max(self.start_ts, self.complete_ts)

    def has_negative_duration(self) -> bool:
        return self.complete_ts is not None and self.complete_ts < self.start_ts


@dataclass(frozen=True)
class Case:
    """One process instance: a case id and its time-ordered events."""

    case_id: str
    events: tuple[Event, ...]

    def first_start(self) -> int:
        return self.events[0].start_ts

    def span_end(self) -> int:
        return max(e.end_ts() for e in self.events)

    def duration_ms(self) -> int:
        """Last event's end (complete when present) minus first event's start."""
        return self.span_end() - self.first_start()

    def activity_sequence(self) -> tuple[str, ...]:
        return tuple(e.activity for e in self.events)


@dataclass(frozen=True)
class Classifier:
    """Rule mapping event attributes to the activity label.

    Multi-part labels join the named attribute values with ``separator``;
    whitespace inside each part becomes "_" so part boundaries stay readable
    (composite labels like "1\\Tool_compounds"). A single-part classifier
    returns the raw value. Missing parts render as "NA".
    """

    parts: tuple[str, ...]
    separator: str = "\\"

    def __post_init__(self) -> None:
        if not self.parts:
            raise ValueError("classifier needs at least one part")


@dataclass(frozen=True)
class TimeRange:
    """Inclusive [start, end] range in epoch ms."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise ValueError(f"range start {self.start} after end {self.end}")

    def contains(self, ts: int) -> bool:
        return self.start <= ts <= self.end

    def overlaps(self, other_start: int, other_end: int) -> bool:
        return other_start <= self.end and other_end >= self.start


@dataclass(frozen=True)
class EventLog:
    """The collection of cases used as process-mining input."""

    name: str
    cases: tuple[Case, ...]
    classifier: Classifier = Classifier(parts=("activity",))
    global_attrs: Mapping[str, AttrValue] = field(default_factory=dict)

    def event_count(self) -> int:
        return sum(len(c.events) for c in self.cases)

    def case_count(self) -> int:
        return len(self.cases)

    def activities(self) -> set[str]:
        return {e.activity for c in self.cases for e in c.events}

    def resources(self) -> set[str]:
        """Distinct non-missing resources."""
        return {e.resource for c in self.cases for e in c.events if e.resource is not None}

    def iter_events(self):
        for case in self.cases:
            for event in case.events:
                yield case, event


def _part_label(value: AttrValue | None, composite: bool) -> str:
    if value is None:
        return MISSING_LABEL
    text = str(value)
    if not text:
        return MISSING_LABEL
    if composite:
        return "_".join(text.split())
    return text


def classify_parts(attributes: Mapping[str, AttrValue], classifier: Classifier) -> str:
    composite = len(classifier.parts) > 1
    parts = [_part_label(attributes.get(key), composite) for key in classifier.parts]
    return classifier.separator.join(parts)


def classify(event: Event, classifier: Classifier) -> str:
    """Deterministic activity label for an event under a classifier."""
    return classify_parts(event.attributes, classifier)


def sort_case_events(case: Case) -> Case:
    """Events ordered by (start_ts, source_index); stable and idempotent."""
    ordered = tuple(sorted(case.events, key=lambda e: (e.start_ts, e.source_index)))
    if ordered == case.events:
        return case
    return replace(case, events=ordered)


def _is_sorted(case: Case) -> bool:
    keys = [(e.start_ts, e.source_index) for e in case.events]
    return all(keys[i] <= keys[i + 1] for i in range(len(keys) - 1))


@dataclass(frozen=True)
class ValidationReport:
    """Structural issues found in a log. Validation reports, never raises."""

    duplicate_case_ids: tuple[str, ...] = ()
    unsorted_cases: tuple[str, ...] = ()
    empty_cases: tuple[str, ...] = ()
    negative_duration_events: tuple[tuple[str, int], ...] = ()
    missing_resource_count: int = 0
    missing_timestamp_count: int = 0

    @property
    def ok(self) -> bool:
        return not (
            self.duplicate_case_ids
            or self.unsorted_cases
            or self.empty_cases
            or self.negative_duration_events
            or self.missing_resource_count
            or self.missing_timestamp_count
        )


def validate_log(log: EventLog) -> ValidationReport:
    seen: set[str] = set()
    duplicates: list[str] = []
    unsorted: list[str] = []
    empty: list[str] = []
    negative: list[tuple[str, int]] = []
    missing_resource = 0
    missing_ts = 0
    for case in log.cases:
        if case.case_id in seen:
            duplicates.append(case.case_id)
        seen.add(case.case_id)
        if not case.events:
            empty.append(case.case_id)
            continue
        if not _is_sorted(case):
            unsorted.append(case.case_id)
        for idx, event in enumerate(case.events):
            if event.has_negative_duration():
                negative.append((case.case_id, idx))
            if event.resource is None:
                missing_resource += 1
            if event.start_ts is None:  # only possible for hand-built logs
                missing_ts += 1
    return ValidationReport(
        duplicate_case_ids=tuple(duplicates),
        unsorted_cases=tuple(unsorted),
        empty_cases=tuple(empty),
        negative_duration_events=tuple(negative),
        missing_resource_count=missing_resource,
        missing_timestamp_count=missing_ts,
    )


def _event_signature(event: Event) -> tuple:
    attrs = tuple(sorted((k, type(v).__name__, v) for k, v in event.attributes.items()))
    return (event.activity, event.start_ts, event.complete_ts, event.resource, attrs)


def logs_equivalent(a: EventLog, b: EventLog) -> bool:
    """Semantic equality: everything except source_index bookkeeping.

    Serialization round trips regenerate source_index from document order,
    which preserves tie order without preserving the raw row numbers.
    """
    if a.name != b.name or a.classifier != b.classifier:
        return False
    if dict(a.global_attrs) != dict(b.global_attrs):
        return False
    if len(a.cases) != len(b.cases):
        return False
    for ca, cb in zip(a.cases, b.cases):
        if ca.case_id != cb.case_id or len(ca.events) != len(cb.events):
            return False
        for ea, eb in zip(ca.events, cb.events):
            if _event_signature(ea) != _event_signature(eb):
                return False
    return True
