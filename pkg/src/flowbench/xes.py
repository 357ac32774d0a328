"""XES-subset import/export for event logs.

The subset covers traces, events, typed attributes (string/int/float/boolean/
date), one classifier declaration, and the concept/time/org keys the model
needs. import(export(log)) is the identity on the log model up to attribute
ordering and source-index bookkeeping.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

from .model import (
    AttrValue,
    Case,
    Classifier,
    Event,
    EventLog,
    Timestamp,
    format_ms,
    parse_iso_ms,
    sort_case_events,
)

ACTIVITY_KEY = "concept:name"
START_KEY = "time:timestamp"
COMPLETE_KEY = "time:complete"
RESOURCE_KEY = "org:resource"


class XesParseError(ValueError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


def _attr_element(parent: ET.Element, key: str, value: AttrValue) -> None:
    if isinstance(value, Timestamp):
        ET.SubElement(parent, "date", key=key, value=format_ms(int(value)))
    elif isinstance(value, bool):
        ET.SubElement(parent, "boolean", key=key, value="true" if value else "false")
    elif isinstance(value, int):
        ET.SubElement(parent, "int", key=key, value=str(value))
    elif isinstance(value, float):
        ET.SubElement(parent, "float", key=key, value=repr(value))
    else:
        ET.SubElement(parent, "string", key=key, value=str(value))


def _encode_keys(parts: tuple[str, ...]) -> str:
    if any(" " in p for p in parts):
        return " ".join(f"'{p}'" for p in parts)
    return " ".join(parts)


def _decode_keys(text: str) -> tuple[str, ...]:
    if "'" in text:
        parts = []
        rest = text
        while "'" in rest:
            _, _, rest = rest.partition("'")
            part, _, rest = rest.partition("'")
            parts.append(part)
        return tuple(parts)
    return tuple(text.split(" "))


def export_xes(log: EventLog) -> bytes:
    root = ET.Element("log", {"xes.version": "1.0", "xes.features": ""})
    ET.SubElement(
        root,
        "classifier",
        name="activity",
        keys=_encode_keys(log.classifier.parts),
        separator=log.classifier.separator,
    )
    _attr_element(root, ACTIVITY_KEY, log.name)
    for key, value in log.global_attrs.items():
        if key != ACTIVITY_KEY:
            _attr_element(root, key, value)
    for case in log.cases:
        trace = ET.SubElement(root, "trace")
        _attr_element(trace, ACTIVITY_KEY, case.case_id)
        for event in case.events:
            node = ET.SubElement(trace, "event")
            _attr_element(node, ACTIVITY_KEY, event.activity)
            ET.SubElement(node, "date", key=START_KEY, value=format_ms(event.start_ts))
            if event.complete_ts is not None:
                ET.SubElement(node, "date", key=COMPLETE_KEY, value=format_ms(event.complete_ts))
            if event.resource is not None:
                _attr_element(node, RESOURCE_KEY, event.resource)
            for key, value in event.attributes.items():
                _attr_element(node, key, value)
    ET.indent(root)
    return ET.tostring(root, encoding="utf-8", xml_declaration=True)


def _parse_value(node: ET.Element) -> AttrValue:
    raw = node.get("value", "")
    if node.tag == "date":
        try:
            return Timestamp(parse_iso_ms(raw))
        except ValueError as exc:
            raise XesParseError(0, f"bad date value {raw!r}: {exc}") from exc
    if node.tag == "int":
        return int(raw)
    if node.tag == "float":
        return float(raw)
    if node.tag == "boolean":
        return raw == "true"
    return raw


def _parse_event(node: ET.Element, source_index: int) -> Event:
    activity = ""
    start_ts: int | None = None
    complete_ts: int | None = None
    resource: str | None = None
    attrs: dict[str, AttrValue] = {}
    for child in node:
        key = child.get("key")
        if key is None:
            raise XesParseError(0, f"attribute element <{child.tag}> without key")
        value = _parse_value(child)
        if key == ACTIVITY_KEY:
            activity = str(value)
        elif key == START_KEY:
            start_ts = int(value)
        elif key == COMPLETE_KEY:
            complete_ts = int(value)
        elif key == RESOURCE_KEY:
            resource = str(value)
        else:
            attrs[key] = value
    if start_ts is None:
        raise XesParseError(0, "event without time:timestamp")
    if not activity:
        raise XesParseError(0, "event without concept:name")
    return Event(
        activity=activity,
        start_ts=start_ts,
        complete_ts=complete_ts,
        resource=resource,
        source_index=source_index,
        attributes=attrs,
    )


def import_xes(data: bytes | str) -> EventLog:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        line = exc.position[0] if exc.position else 0
        raise XesParseError(line, str(exc)) from exc
    if root.tag != "log":
        raise XesParseError(0, f"root element is <{root.tag}>, expected <log>")

    classifier = Classifier(parts=("activity",))
    name = "log"
    global_attrs: dict[str, AttrValue] = {}
    cases: list[Case] = []
    counter = 0
    for child in root:
        if child.tag == "classifier":
            classifier = Classifier(
                parts=_decode_keys(child.get("keys", "activity")),
                separator=child.get("separator", "\\"),
            )
        elif child.tag == "trace":
            case_id = ""
            events: list[Event] = []
            for part in child:
                if part.tag == "event":
                    events.append(_parse_event(part, counter))
                    counter += 1
                elif part.get("key") == ACTIVITY_KEY:
                    case_id = str(_parse_value(part))
                # other trace-level attributes are outside the subset
            if not case_id:
                raise XesParseError(0, "trace without concept:name")
            cases.append(sort_case_events(Case(case_id=case_id, events=tuple(events))))
        elif child.get("key") == ACTIVITY_KEY:
            name = str(_parse_value(child))
        elif child.get("key"):
            global_attrs[child.get("key")] = _parse_value(child)
    return EventLog(name=name, cases=tuple(cases), classifier=classifier, global_attrs=global_attrs)
