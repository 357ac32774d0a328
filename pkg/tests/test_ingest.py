from __future__ import annotations

import random

import pytest

from flowbench.ingest import (
    ColumnMapping,
    JoinSpec,
    MissingColumnError,
    MissingPolicy,
    anonymize,
    join_tables,
    load_table,
    parse_csv,
    write_anonymization_map,
)
from flowbench.social import handover
from loggen import T0, make_log, random_log


class TestParseCsv:
    def test_table13_sample(self, table13_csv, table13_mapping):
        log, report = parse_csv(table13_csv, table13_mapping)
        assert log.event_count() == 3
        assert log.case_count() == 3
        assert log.activities() == {"1\\TARGET2G", "1\\Dehydrogenase", "1\\Tdp2"}
        assert log.resources() == {"staff_18", "staff_11"}
        assert report.rows_read == 3
        assert report.events_emitted == 3
        assert report.events_dropped == 0

    def test_header_only_csv(self, table13_mapping):
        header = "REG_ID,PROJECT_ID,CREATION_DATE,BATCH_NUMBER,SUPPLIER,ANONYMISATION_ISID,Year,PROJECT_NAME\n"
        log, report = parse_csv(header.encode(), table13_mapping)
        assert log.event_count() == 0
        assert report.rows_read == 0

    def test_missing_column_raises(self, table13_csv):
        mapping = ColumnMapping(
            case_id_col="REG_ID",
            activity_cols=("NO_SUCH_COLUMN",),
            start_ts_col="CREATION_DATE",
        )
        with pytest.raises(MissingColumnError):
            parse_csv(table13_csv, mapping)

    def test_drop_case_on_unparsable_timestamp(self):
        # rows 3 and 4 share case cB; row 3's timestamp cannot parse
        csv_text = (
            "case,act,ts\n"
            "cA,x,2011/01/05 10:00\n"
            "cA,y,2011/01/05 11:00\n"
            "cB,x,not-a-date\n"
            "cB,y,2011/01/06 09:00\n"
            "cC,z,2011/01/07 12:00\n"
        )
        mapping = ColumnMapping(
            case_id_col="case", activity_cols=("act",), start_ts_col="ts"
        )
        log, report = parse_csv(csv_text, mapping, MissingPolicy(mode="drop_case"))
        assert log.event_count() == 3
        assert {c.case_id for c in log.cases} == {"cA", "cC"}
        assert report.cases_dropped == 1
        assert report.unparsed_timestamps == 1
        assert report.rows_read == report.events_emitted + report.events_dropped == 5

    def test_drop_event_keeps_rest_of_case(self):
        csv_text = (
            "case,act,ts\n"
            "cB,x,not-a-date\n"
            "cB,y,2011/01/06 09:00\n"
        )
        mapping = ColumnMapping(case_id_col="case", activity_cols=("act",), start_ts_col="ts")
        log, report = parse_csv(csv_text, mapping, MissingPolicy(mode="drop_event"))
        assert log.event_count() == 1
        assert report.events_dropped == 1

    def test_keep_as_na_renders_missing_parts(self):
        csv_text = "case,batch,project,ts\nc1,1,,2011/01/05\n"
        mapping = ColumnMapping(
            case_id_col="case", activity_cols=("batch", "project"), start_ts_col="ts"
        )
        log, _ = parse_csv(csv_text, mapping)
        assert log.cases[0].events[0].activity == "1\\NA"

    def test_hash_na_cells_normalize_to_missing(self):
        csv_text = "case,act,ts,res\nc1,x,2011/01/05,#N/A\n"
        mapping = ColumnMapping(
            case_id_col="case",
            activity_cols=("act",),
            start_ts_col="ts",
            resource_col="res",
        )
        log, _ = parse_csv(csv_text, mapping)
        assert log.cases[0].events[0].resource is None

    def test_negative_duration_flagged_never_reordered(self):
        csv_text = "case,act,start,end\nc1,x,2011/01/05 10:00,2011/01/04 10:00\n"
        mapping = ColumnMapping(
            case_id_col="case",
            activity_cols=("act",),
            start_ts_col="start",
            complete_ts_col="end",
        )
        log, report = parse_csv(csv_text, mapping)
        assert report.negative_durations == 1
        event = log.cases[0].events[0]
        assert event.complete_ts is not None and event.complete_ts < event.start_ts

    def test_per_row_accounting_on_random_policies(self):
        rng = random.Random(3)
        for mode in ("keep_as_na", "drop_event", "drop_case"):
            lines = ["case,act,ts"]
            for i in range(200):
                ts = "bad" if rng.random() < 0.15 else "2011/01/05 10:00"
                lines.append(f"c{rng.randint(0, 30)},x,{ts}")
            log, report = parse_csv("\n".join(lines), ColumnMapping(
                case_id_col="case", activity_cols=("act",), start_ts_col="ts"
            ), MissingPolicy(mode=mode))
            assert report.rows_read == 200
            assert report.rows_read == report.events_emitted + report.events_dropped
            assert report.events_emitted == log.event_count()


class TestJoinTables:
    def test_protocol_lookup_from_paper_tables(self):
        base = load_table(
            "PROTOCOL_ID,EXPERIMENT_ID,CREATED_DATE\n"
            "121,138999,2011/1/6 16:35\n"
            "146,138535,2010/9/13 9:45\n"
        )
        protocols = load_table(
            "PROTOCOL_ID,PROTOCOL,PROTOCOL_TYPE\n"
            "121,Chemistry Notebook,NOTEBOOK\n"
            "146,EC50 ENZYME,SCREENING\n"
        )
        spec = JoinSpec.from_dict(
            {
                "base_table": "experiments",
                "joins": [
                    {
                        "table": "protocols",
                        "base_key": "PROTOCOL_ID",
                        "foreign_key": "PROTOCOL_ID",
                        "projected_columns": ["PROTOCOL", "PROTOCOL_TYPE"],
                    }
                ],
            }
        )
        joined, report = join_tables({"experiments": base, "protocols": protocols}, spec)
        assert joined.rows[0]["PROTOCOL"] == "Chemistry Notebook"
        assert joined.rows[0]["PROTOCOL_TYPE"] == "NOTEBOOK"
        assert len(joined.rows) == 2
        assert report.duplicate_keys == []

    def test_unmatched_lookup_yields_na(self):
        base = load_table("id,k\n1,999\n")
        lookup = load_table("k,v\n1,one\n")
        spec = JoinSpec.from_dict(
            {
                "base_table": "b",
                "joins": [
                    {"table": "l", "base_key": "k", "foreign_key": "k", "projected_columns": ["v"]}
                ],
            }
        )
        joined, _ = join_tables({"b": base, "l": lookup}, spec)
        assert joined.rows[0]["v"] == "NA"

    def test_duplicate_key_reported_first_match_wins(self):
        base = load_table("id,k\n1,7\n")
        lookup = load_table("k,v\n7,first\n7,second\n")
        spec = JoinSpec.from_dict(
            {
                "base_table": "b",
                "joins": [
                    {"table": "l", "base_key": "k", "foreign_key": "k", "projected_columns": ["v"]}
                ],
            }
        )
        joined, report = join_tables({"b": base, "l": lookup}, spec)
        assert joined.rows[0]["v"] == "first"
        assert report.duplicate_keys == [("l", "7")]

    def test_three_base_rows_two_lookups_cell_by_cell(self):
        # hand-built cross reference used as the oracle
        base = load_table("id,k1,k2\nr1,a,x\nr2,b,y\nr3,zz,x\n")
        l1 = load_table("k,n\na,alpha\nb,beta\n")
        l2 = load_table("kk,m\nx,ex\ny,why\n")
        spec = JoinSpec.from_dict(
            {
                "base_table": "base",
                "joins": [
                    {"table": "l1", "base_key": "k1", "foreign_key": "k", "projected_columns": ["n"]},
                    {"table": "l2", "base_key": "k2", "foreign_key": "kk", "projected_columns": ["m"]},
                ],
            }
        )
        joined, _ = join_tables({"base": base, "l1": l1, "l2": l2}, spec)
        expected = [
            {"id": "r1", "k1": "a", "k2": "x", "n": "alpha", "m": "ex"},
            {"id": "r2", "k1": "b", "k2": "y", "n": "beta", "m": "why"},
            {"id": "r3", "k1": "zz", "k2": "x", "n": "NA", "m": "ex"},
        ]
        assert [dict(r) for r in joined.rows] == expected
        assert len(joined.rows) == len(base.rows)


class TestAnonymize:
    def test_first_appearance_numbering(self):
        log = make_log(
            [
                ("c1", [("x", T0, None, "alice"), ("y", T0 + 1, None, "bob")]),
                ("c2", [("x", T0, None, "alice")]),
            ]
        )
        anonymized, mapping = anonymize(log)
        assert mapping == {"alice": "staff_01", "bob": "staff_02"}
        resources = [e.resource for c in anonymized.cases for e in c.events]
        assert resources == ["staff_01", "staff_02", "staff_01"]

    def test_idempotent_on_anonymized_log(self):
        log = make_log([("c1", [("x", T0, None, "staff_03")])])
        again, mapping = anonymize(log)
        assert again == log
        assert mapping == {"staff_03": "staff_03"}

    def test_fifty_names_bijective(self):
        specs = [(f"c{i}", [("x", T0 + i, None, f"person {i}")]) for i in range(50)]
        log = make_log(specs)
        _, mapping = anonymize(log)
        assert len(mapping) == 50
        assert sorted(mapping.values()) == sorted({f"staff_{i:02d}" for i in range(1, 51)})
        inverted = {v: k for k, v in mapping.items()}
        assert len(inverted) == 50

    def test_missing_resources_stay_missing(self):
        log = make_log([("c1", [("x", T0), ("y", T0 + 1, None, "kim")])])
        anonymized, mapping = anonymize(log)
        assert anonymized.cases[0].events[0].resource is None
        assert mapping == {"kim": "staff_01"}

    def test_handover_isomorphic_under_mapping(self):
        rng = random.Random(5)
        for _ in range(20):
            log = random_log(rng, max_cases=20, max_events=6)
            anonymized, mapping = anonymize(log)
            before = handover(log)
            after = handover(anonymized)
            remapped = {
                (mapping[a], mapping[b]): w for (a, b), w in before.edges.items()
            }
            assert remapped == dict(after.edges)

    def test_map_file_is_owner_only(self, tmp_path):
        log = make_log([("c1", [("x", T0, None, "zoe")])])
        _, mapping = anonymize(log)
        path = tmp_path / "map.csv"
        write_anonymization_map(mapping, str(path))
        assert path.read_text() == "original,pseudonym\nzoe,staff_01\n"
        assert (path.stat().st_mode & 0o777) == 0o600
