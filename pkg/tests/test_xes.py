from __future__ import annotations

import random

import pytest

from flowbench.ingest import parse_csv
from flowbench.model import (
    Case,
    Classifier,
    Event,
    EventLog,
    Timestamp,
    logs_equivalent,
)
from flowbench.xes import XesParseError, export_xes, import_xes
from loggen import T0, random_log


def test_empty_log_round_trip():
    log = EventLog(name="empty", cases=())
    data = export_xes(log)
    assert b"<trace>" not in data
    back = import_xes(data)
    assert back.case_count() == 0
    assert logs_equivalent(log, back)


def test_table13_round_trip(table13_csv, table13_mapping):
    log, _ = parse_csv(table13_csv, table13_mapping, name="registrations-sample")
    back = import_xes(export_xes(log))
    assert logs_equivalent(log, back)
    assert back.classifier == log.classifier
    assert back.activities() == {"1\\TARGET2G", "1\\Dehydrogenase", "1\\Tdp2"}


def test_typed_attributes_survive():
    event = Event(
        activity="x",
        start_ts=T0,
        complete_ts=T0 + 1000,
        resource="staff_01",
        attributes={
            "s": "text",
            "i": 42,
            "f": 2.5,
            "b": True,
            "t": Timestamp(T0 + 500),
        },
    )
    log = EventLog(
        name="typed",
        cases=(Case(case_id="c", events=(event,)),),
        global_attrs={"origin": "unit test", "rows": 1},
    )
    back = import_xes(export_xes(log))
    attrs = back.cases[0].events[0].attributes
    assert attrs["s"] == "text"
    assert attrs["i"] == 42 and not isinstance(attrs["i"], bool)
    assert attrs["f"] == 2.5
    assert attrs["b"] is True
    assert isinstance(attrs["t"], Timestamp) and int(attrs["t"]) == T0 + 500
    assert dict(back.global_attrs) == {"origin": "unit test", "rows": 1}


def test_classifier_with_spaced_keys_round_trips():
    log = EventLog(
        name="k",
        cases=(),
        classifier=Classifier(parts=("REG ID", "PROJECT NAME"), separator="/"),
    )
    back = import_xes(export_xes(log))
    assert back.classifier == log.classifier


def test_random_logs_round_trip_structural_equality():
    rng = random.Random(42)
    for _ in range(200):
        log = random_log(rng, max_cases=12, max_events=6, with_complete=True)
        back = import_xes(export_xes(log))
        assert logs_equivalent(log, back)


def test_malformed_xml_raises_with_line():
    with pytest.raises(XesParseError) as err:
        import_xes(b"<log><trace></log>")
    assert err.value.line >= 1


def test_wrong_root_element():
    with pytest.raises(XesParseError):
        import_xes(b"<notalog/>")


def test_event_without_timestamp_rejected():
    doc = (
        b'<log xes.version="1.0"><trace>'
        b'<string key="concept:name" value="c"/>'
        b'<event><string key="concept:name" value="a"/></event>'
        b"</trace></log>"
    )
    with pytest.raises(XesParseError, match="time:timestamp"):
        import_xes(doc)
