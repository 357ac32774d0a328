from __future__ import annotations

import random
from collections import defaultdict

import pytest

from flowbench.social import handover, rank_degrees, subcontract, working_together
from loggen import T0, make_log, random_log


def resource_case(case_id, resources):
    return (case_id, [(f"a{i}", T0 + i, None, r) for i, r in enumerate(resources)])


class TestHandover:
    def test_single_event_cases_have_nodes_but_no_edges(self, table13_log):
        net = handover(table13_log)
        assert net.edges == {}
        assert set(net.nodes) == {"staff_11", "staff_18"}

    def test_back_and_forth(self):
        net = handover(make_log([resource_case("c", ["A", "B", "A"])]))
        assert dict(net.edges) == {("A", "B"): 1, ("B", "A"): 1}

    def test_self_transfer_excluded(self):
        net = handover(make_log([resource_case("c", ["A", "A"])]))
        assert net.edges == {}
        assert net.skipped_pairs == 1

    def test_missing_resource_breaks_chain(self):
        net = handover(make_log([resource_case("c", ["A", None, "B"])]))
        assert net.edges == {}
        assert net.skipped_pairs == 2

    def test_total_weight_equals_countable_pairs(self):
        rng = random.Random(71)
        for _ in range(50):
            log = random_log(rng, max_cases=30, missing_resource_rate=0.2)
            net = handover(log)
            expected = 0
            for case in log.cases:
                for prev, nxt in zip(case.events, case.events[1:]):
                    if prev.resource and nxt.resource and prev.resource != nxt.resource:
                        expected += 1
            assert sum(net.edges.values()) == expected


class TestSubcontract:
    def test_aba_counts_once(self):
        net = subcontract(make_log([resource_case("c", ["A", "B", "A"])]))
        assert dict(net.edges) == {("A", "B"): 1}

    def test_abc_no_edge(self):
        net = subcontract(make_log([resource_case("c", ["A", "B", "C"])]))
        assert net.edges == {}

    def test_overlapping_triples_all_count(self):
        net = subcontract(make_log([resource_case("c", ["A", "B", "A", "B", "A"])]))
        assert dict(net.edges) == {("A", "B"): 2, ("B", "A"): 1}

    def test_bounded_by_handover_both_ways(self):
        rng = random.Random(73)
        for _ in range(50):
            log = random_log(rng, max_cases=30)
            h = handover(log)
            s = subcontract(log)
            for (i, j), w in s.edges.items():
                assert w <= min(h.edges.get((i, j), 0), h.edges.get((j, i), 0))


class TestWorkingTogether:
    def test_pair_in_one_case(self):
        net = working_together(make_log([resource_case("c", ["A", "B"])]))
        assert dict(net.edges) == {("A", "B"): 1.0}

    def test_never_sharing_cases_isolated(self):
        log = make_log([resource_case("c1", ["A"]), resource_case("c2", ["B"])])
        net = working_together(log)
        assert net.edges == {}
        assert set(net.nodes) == {"A", "B"}

    def test_jaccard_metric(self):
        log = make_log(
            [
                resource_case("c1", ["A", "B"]),
                resource_case("c2", ["A"]),
                resource_case("c3", ["B"]),
            ]
        )
        net = working_together(log, metric="jaccard")
        assert net.edges[("A", "B")] == pytest.approx(1 / 3)

    def test_symmetric_zero_diagonal_storage(self):
        rng = random.Random(79)
        for _ in range(30):
            log = random_log(rng, max_cases=20)
            net = working_together(log)
            for (i, j), w in net.edges.items():
                assert i < j and w > 0

    def test_against_set_intersection_oracle(self):
        rng = random.Random(83)
        for _ in range(20):
            log = random_log(rng, max_cases=10, max_events=5)
            cases_of = defaultdict(set)
            for case in log.cases:
                for event in case.events:
                    if event.resource:
                        cases_of[event.resource].add(case.case_id)
            resources = sorted(cases_of)
            expected = {}
            for i, a in enumerate(resources):
                for b in resources[i + 1:]:
                    joint = len(cases_of[a] & cases_of[b])
                    if joint:
                        expected[(a, b)] = float(joint)
            assert dict(working_together(log).edges) == expected

    def test_unknown_metric_rejected(self, table13_log):
        with pytest.raises(ValueError):
            working_together(table13_log, metric="cosine")


class TestRankDegrees:
    def test_all_isolated_in_outermost_band(self, table13_log):
        net = handover(table13_log)  # nodes but no edges
        ranking = rank_degrees(net, bands=5)
        assert set(ranking.values()) == {5}

    def test_hub_and_leaves(self):
        log = make_log(
            [resource_case(f"c{i}", ["HUB", leaf]) for i, leaf in enumerate("WXYZ")]
        )
        net = handover(log)
        ranking = rank_degrees(net, bands=5)
        assert ranking["HUB"] == 1
        leaf_bands = {ranking[leaf] for leaf in "WXYZ"}
        assert len(leaf_bands) == 1
        assert leaf_bands.pop() > 1

    def test_ties_share_a_band(self):
        rng = random.Random(89)
        log = random_log(rng, max_cases=30)
        net = handover(log)
        ranking = rank_degrees(net)
        degree = {n: net.weighted_degree(n) for n in net.nodes}
        for a in net.nodes:
            for b in net.nodes:
                if degree[a] == degree[b]:
                    assert ranking[a] == ranking[b]

    def test_band_bounds(self):
        rng = random.Random(97)
        for bands in (1, 3, 5):
            log = random_log(rng, max_cases=15)
            ranking = rank_degrees(handover(log), bands=bands)
            assert all(1 <= band <= bands for band in ranking.values())


class TestInvariances:
    def test_case_order_permutation(self):
        rng = random.Random(91)
        log = random_log(rng, max_cases=20)
        shuffled_cases = list(log.cases)
        rng.shuffle(shuffled_cases)
        shuffled = type(log)(
            name=log.name, cases=tuple(shuffled_cases), classifier=log.classifier
        )
        for miner in (handover, subcontract, working_together):
            assert dict(miner(log).edges) == dict(miner(shuffled).edges)

    def test_single_event_logs_disconnect_everything(self):
        rng = random.Random(93)
        log = random_log(rng, max_events=1, max_cases=50)
        assert handover(log).edges == {}
        assert subcontract(log).edges == {}
