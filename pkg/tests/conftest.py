from __future__ import annotations

import json
from pathlib import Path

import pytest

from flowbench.ingest import ColumnMapping, MissingPolicy, parse_csv
from loggen import DAY_MS, T0, make_log

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def table13_csv() -> bytes:
    return (FIXTURES / "table13.csv").read_bytes()


@pytest.fixture(scope="session")
def table13_config() -> dict:
    return json.loads((FIXTURES / "table13_config.json").read_text())


@pytest.fixture(scope="session")
def table13_mapping(table13_config) -> ColumnMapping:
    return ColumnMapping.from_dict(table13_config["mapping"])


@pytest.fixture()
def table13_log(table13_csv, table13_mapping):
    log, _report = parse_csv(
        table13_csv, table13_mapping, MissingPolicy(), name="registrations-sample"
    )
    return log


@pytest.fixture()
def f2_log():
    """One case walking a three-step chain with 10-day gaps."""
    return make_log(
        [
            (
                "F2",
                [
                    ("1\\P", T0),
                    ("2\\P", T0 + 10 * DAY_MS),
                    ("3\\P", T0 + 20 * DAY_MS),
                ],
            )
        ],
        name="f2",
    )
