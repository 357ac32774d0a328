"""Session store: named immutable log snapshots keyed by content hash.

The key is the sha256 of a canonical JSON rendering of the log model
(excluding source-index bookkeeping), so re-uploading identical bytes maps
to the same snapshot and an identity filter returns the source key.
Insertion is the only mutation and is serialized behind a lock.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field

from .ingest import IngestReport
from .model import AttrValue, EventLog, Timestamp


def _typed(value: AttrValue) -> list:
    if isinstance(value, Timestamp):
        return ["ts", int(value)]
    if isinstance(value, bool):
        return ["bool", value]
    if isinstance(value, int):
        return ["int", value]
    if isinstance(value, float):
        return ["float", repr(value)]
    return ["str", str(value)]


def canonical_log_json(log: EventLog) -> bytes:
    doc = {
        "name": log.name,
        "classifier": {"parts": list(log.classifier.parts), "separator": log.classifier.separator},
        "global_attrs": {k: _typed(v) for k, v in sorted(log.global_attrs.items())},
        "cases": [
            {
                "id": case.case_id,
                "events": [
                    {
                        "activity": e.activity,
                        "start": e.start_ts,
                        "complete": e.complete_ts,
                        "resource": e.resource,
                        "attrs": {k: _typed(v) for k, v in sorted(e.attributes.items())},
                    }
                    for e in case.events
                ],
            }
            for case in log.cases
        ],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


def snapshot_key(log: EventLog) -> str:
    return hashlib.sha256(canonical_log_json(log)).hexdigest()


@dataclass(frozen=True)
class Snapshot:
    key: str
    log: EventLog
    ingest_report: IngestReport | None = None
    parent: str | None = None
    pipeline: tuple = ()

    def to_dict(self) -> dict:
        return {
            "snapshot": self.key,
            "name": self.log.name,
            "events": self.log.event_count(),
            "cases": self.log.case_count(),
            "parent": self.parent,
            "pipeline": list(self.pipeline),
        }


@dataclass
class SessionStore:
    _snapshots: dict[str, Snapshot] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock)

    def put(
        self,
        log: EventLog,
        ingest_report: IngestReport | None = None,
        parent: str | None = None,
        pipeline: tuple = (),
    ) -> Snapshot:
        key = snapshot_key(log)
        with self._lock:
            existing = self._snapshots.get(key)
            if existing is not None:
                return existing
            snapshot = Snapshot(
                key=key, log=log, ingest_report=ingest_report, parent=parent, pipeline=pipeline
            )
            self._snapshots[key] = snapshot
            return snapshot

    def get(self, key: str) -> Snapshot | None:
        return self._snapshots.get(key)

    def keys(self) -> list[str]:
        return list(self._snapshots)
