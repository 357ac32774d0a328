"""flowbench: an event-log process-mining workbench.

Builds event logs from CSV/XES sources and performs discovery-style
analysis: descriptive statistics, directly-follows process maps with
frequency and duration metrics, Alpha-miner Petri nets, dependency
matrices, dotted charts, timeframe filtering, and organizational social
networks, surfaced as a library, a CLI and an HTTP JSON API.
"""

from .model import (
    Case,
    Classifier,
    Event,
    EventLog,
    TimeRange,
    Timestamp,
    classify,
    logs_equivalent,
    sort_case_events,
    validate_log,
)

__version__ = "0.1.0"

__all__ = [
    "Case",
    "Classifier",
    "Event",
    "EventLog",
    "TimeRange",
    "Timestamp",
    "classify",
    "logs_equivalent",
    "sort_case_events",
    "validate_log",
    "__version__",
]
