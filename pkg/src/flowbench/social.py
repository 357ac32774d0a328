"""Organizational mining: who hands work to whom, who subcontracts to whom,
and who shares cases, plus the five-degree ranking used for the concentric
network layout.

Events with a missing resource break handover chains; they never bridge an
edge and the skips are counted.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Mapping

from .model import EventLog

KINDS = ("handover", "subcontract", "working_together")


@dataclass(frozen=True)
class SocialNetwork:
    kind: str
    nodes: tuple[str, ...]
    edges: Mapping[tuple[str, str], float]
    directed: bool
    skipped_pairs: int = 0

    def weighted_degree(self, node: str) -> float:
        return sum(w for (i, j), w in self.edges.items() if i == node or j == node)

    def degree(self, node: str) -> int:
        return sum(1 for (i, j) in self.edges if i == node or j == node)

    def to_dict(self, bands: int = 5) -> dict:
        ranking = rank_degrees(self, bands=bands)
        return {
            "kind": self.kind,
            "directed": self.directed,
            "nodes": [
                {
                    "id": node,
                    "band": ranking[node],
                    "degree": self.degree(node),
                    "weighted_degree": self.weighted_degree(node),
                }
                for node in self.nodes
            ],
            "edges": [
                {"source": i, "target": j, "weight": w}
                for (i, j), w in sorted(self.edges.items())
            ],
            "skipped_pairs": self.skipped_pairs,
        }


def _all_resources(log: EventLog) -> tuple[str, ...]:
    return tuple(sorted(log.resources()))


def handover(log: EventLog) -> SocialNetwork:
    """Directed: consecutive events with two distinct present resources."""
    weights: Counter[tuple[str, str]] = Counter()
    skipped = 0
    for case in log.cases:
        for prev, nxt in zip(case.events, case.events[1:]):
            a, b = prev.resource, nxt.resource
            if a is None or b is None or a == b:
                skipped += 1
                continue
            weights[(a, b)] += 1
    return SocialNetwork(
        kind="handover",
        nodes=_all_resources(log),
        edges=dict(weights),
        directed=True,
        skipped_pairs=skipped,
    )


def subcontract(log: EventLog) -> SocialNetwork:
    """Directed: i -> j for every sliding event triple resourced (i, j, i)."""
    weights: Counter[tuple[str, str]] = Counter()
    for case in log.cases:
        events = case.events
        for k in range(len(events) - 2):
            i, j, i2 = events[k].resource, events[k + 1].resource, events[k + 2].resource
            if i is None or j is None or i2 != i or j == i:
                continue
            weights[(i, j)] += 1
    return SocialNetwork(
        kind="subcontract",
        nodes=_all_resources(log),
        edges=dict(weights),
        directed=True,
    )


def working_together(log: EventLog, metric: str = "joint_cases") -> SocialNetwork:
    """Symmetric: resources sharing cases, stored once per unordered pair."""
    if metric not in ("joint_cases", "jaccard"):
        raise ValueError(f"unknown working-together metric {metric!r}")
    cases_of: dict[str, set[str]] = defaultdict(set)
    for case in log.cases:
        for event in case.events:
            if event.resource is not None:
                cases_of[event.resource].add(case.case_id)
    resources = sorted(cases_of)
    edges: dict[tuple[str, str], float] = {}
    for idx, i in enumerate(resources):
        for j in resources[idx + 1:]:
            joint = len(cases_of[i] & cases_of[j])
            if joint == 0:
                continue
            if metric == "joint_cases":
                edges[(i, j)] = float(joint)
            else:
                edges[(i, j)] = joint / len(cases_of[i] | cases_of[j])
    return SocialNetwork(
        kind="working_together",
        nodes=_all_resources(log),
        edges=edges,
        directed=False,
    )


def rank_degrees(net: SocialNetwork, bands: int = 5) -> dict[str, int]:
    """Quantile bands over weighted degree, band 1 = highest.

    Ties share a band; zero-degree nodes always land in the outermost band.
    """
    if bands < 1:
        raise ValueError("bands must be >= 1")
    degrees = {node: net.weighted_degree(node) for node in net.nodes}
    active = [node for node, d in degrees.items() if d > 0]
    ranking = {node: bands for node in net.nodes}
    if not active:
        return ranking
    n = len(active)
    for node in active:
        higher = sum(1 for other in active if degrees[other] > degrees[node])
        ranking[node] = min(bands, higher * bands // n + 1)
    return ranking
