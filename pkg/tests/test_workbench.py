from __future__ import annotations

import random

import pytest

from flowbench.discover import alpha_miner, build_dfg
from flowbench.exports import MetricMismatchError, dotted_chart_csv, export_dot
from flowbench.filters import TimeframeFilter, YearRangeFilter, apply_filter
from flowbench.model import EventLog, TimeRange
from flowbench.replay import END, START, replay_stream
from flowbench.social import handover, working_together
from flowbench.stats import dotted_chart
from flowbench.store import SessionStore, snapshot_key
from loggen import DAY_MS, T0, make_log, random_log


class TestExportDot:
    def test_empty_dfg_has_only_start_end(self):
        dot = export_dot(build_dfg(EventLog(name="e", cases=())))
        assert 'label="START"' in dot and 'label="END"' in dot
        assert "->" not in dot

    def test_f2_mean_duration_labels(self, f2_log):
        dot = export_dot(build_dfg(f2_log), "mean_duration")
        assert dot.count('"10 days"') == 2

    def test_byte_identical_across_runs(self, f2_log, table13_log):
        for log in (f2_log, table13_log):
            dfg_a = export_dot(build_dfg(log), "frequency")
            dfg_b = export_dot(build_dfg(log), "frequency")
            assert dfg_a == dfg_b
        assert export_dot(alpha_miner(table13_log)) == export_dot(alpha_miner(table13_log))
        assert export_dot(handover(table13_log), "weight") == export_dot(
            handover(table13_log), "weight"
        )

    def test_metric_mismatch(self, table13_log):
        with pytest.raises(MetricMismatchError):
            export_dot(build_dfg(table13_log), "weight")
        with pytest.raises(MetricMismatchError):
            export_dot(handover(table13_log), "mean_duration")
        with pytest.raises(MetricMismatchError):
            export_dot(alpha_miner(table13_log), "total_duration")

    def test_social_dot_directedness(self, table13_log):
        dot = export_dot(handover(table13_log), "weight")
        assert dot.startswith("digraph")
        log = make_log([("c", [("a", T0, None, "A"), ("b", T0 + 1, None, "B")])])
        undirected = export_dot(working_together(log), "weight")
        assert undirected.startswith("graph") and "--" in undirected

    def test_quotes_escaped(self):
        log = make_log([("c", [('say "hi"', T0)])])
        dot = export_dot(build_dfg(log))
        assert '\\"hi\\"' in dot


class TestDottedCsv:
    def test_header_and_rows(self, table13_log):
        csv_text = dotted_chart_csv(dotted_chart(table13_log, category="resource"))
        lines = csv_text.strip().split("\n")
        assert lines[0] == "row_index,x,category"
        assert len(lines) == 1 + table13_log.event_count()


class TestReplayStream:
    def test_single_event_case_two_hops(self):
        log = make_log([("c", [("a", T0)])])
        stream = replay_stream(log)
        assert stream.token_count == 1
        assert [(h.source, h.target) for h in stream.hops] == [(START, "a"), ("a", END)]

    def test_f2_hops_match_timestamps(self, f2_log):
        stream = replay_stream(f2_log, build_dfg(f2_log))
        hops = sorted(stream.hops, key=lambda h: h.seq)
        assert len(hops) == 4
        assert (hops[0].source, hops[0].target) == (START, "1\\P")
        assert hops[0].depart_ts == hops[0].arrive_ts == T0
        assert (hops[1].source, hops[1].target) == ("1\\P", "2\\P")
        assert hops[1].depart_ts == T0 and hops[1].arrive_ts == T0 + 10 * DAY_MS
        assert (hops[2].source, hops[2].target) == ("2\\P", "3\\P")
        assert hops[2].arrive_ts == T0 + 20 * DAY_MS
        assert (hops[3].source, hops[3].target) == ("3\\P", END)

    def test_token_count_equals_case_count(self):
        rng = random.Random(51)
        for _ in range(10):
            log = random_log(rng, max_cases=30)
            stream = replay_stream(log)
            assert stream.token_count == log.case_count()
            assert len({h.token_id for h in stream.hops}) == log.case_count()

    def test_per_token_monotone_and_global_sort(self):
        rng = random.Random(53)
        log = random_log(rng, max_cases=20, with_complete=True)
        stream = replay_stream(log)
        departs = [h.depart_ts for h in stream.hops]
        assert departs == sorted(departs)
        per_token = {}
        for hop in sorted(stream.hops, key=lambda h: (h.token_id, h.seq)):
            last = per_token.get(hop.token_id)
            if last is not None:
                assert last <= hop.depart_ts
            assert hop.depart_ts <= hop.arrive_ts
            per_token[hop.token_id] = hop.arrive_ts

    def test_foreign_dfg_rejected(self, f2_log, table13_log):
        with pytest.raises(ValueError):
            replay_stream(f2_log, build_dfg(table13_log))


class TestSessionStore:
    def test_same_log_same_key(self, table13_log):
        store = SessionStore()
        a = store.put(table13_log)
        b = store.put(table13_log)
        assert a.key == b.key
        assert store.get(a.key) is a

    def test_key_ignores_source_index(self, table13_log):
        from dataclasses import replace

        reindexed = replace(
            table13_log,
            cases=tuple(
                replace(
                    case,
                    events=tuple(replace(e, source_index=e.source_index + 100) for e in case.events),
                )
                for case in table13_log.cases
            ),
        )
        assert snapshot_key(table13_log) == snapshot_key(reindexed)

    def test_identity_filter_returns_source_key(self, table13_log):
        store = SessionStore()
        base = store.put(table13_log)
        filtered = apply_filter(
            table13_log,
            YearRangeFilter(2011, 2015),
        )
        # the fixture lies inside the range, so content is unchanged
        again = store.put(filtered, parent=base.key)
        assert again.key == base.key

    def test_distinct_content_distinct_keys(self, table13_log, f2_log):
        assert snapshot_key(table13_log) != snapshot_key(f2_log)

    def test_provenance_recorded(self, table13_log):
        store = SessionStore()
        base = store.put(table13_log)
        narrowed = apply_filter(table13_log, TimeframeFilter(TimeRange(0, T0), "trim"))
        snap = store.put(narrowed, parent=base.key, pipeline=("trim",))
        assert snap.parent == base.key
        assert snap.pipeline == ("trim",)
