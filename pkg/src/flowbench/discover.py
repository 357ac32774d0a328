"""Control-flow discovery over event logs.

Builds the directly-follows graph with frequency and waiting-time metrics,
simplifies it rank-wise (the activity/path slider semantics), derives the
footprint relations, runs the classic Alpha construction to a Petri net,
scores pairwise causal confidence, and clusters activities by case
co-occurrence.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .model import EventLog
from .stats import DurationStats, duration_stats

SOURCE_PLACE = "p#source"
SINK_PLACE = "p#sink"


@dataclass(frozen=True)
class NodeStats:
    absolute_freq: int
    case_freq: int
    max_repetitions: int

    def to_dict(self) -> dict:
        return {
            "absolute_freq": self.absolute_freq,
            "case_freq": self.case_freq,
            "max_repetitions": self.max_repetitions,
        }


@dataclass(frozen=True)
class EdgeMetrics:
    absolute_freq: int
    case_freq: int
    durations: DurationStats
    total_duration: float = 0.0

    def to_dict(self) -> dict:
        return {
            "absolute_freq": self.absolute_freq,
            "case_freq": self.case_freq,
            "total_ms": self.total_duration,
            "mean_ms": self.durations.mean,
            "median_ms": self.durations.median,
            "max_ms": self.durations.max,
        }


@dataclass(frozen=True)
class Dfg:
    """Directly-follows graph: per-activity and per-edge counts plus waits.

    Waiting time of an edge instance is the successor's start minus the
    predecessor's completion (its start when no completion is recorded),
    clamped at zero; clamps are counted in negative_waits.
    """

    nodes: Mapping[str, NodeStats]
    edges: Mapping[tuple[str, str], EdgeMetrics]
    start_counts: Mapping[str, int]
    end_counts: Mapping[str, int]
    negative_waits: int = 0

    def activities(self) -> list[str]:
        return sorted(self.nodes)

    def to_dict(self) -> dict:
        return {
            "nodes": {a: s.to_dict() for a, s in sorted(self.nodes.items())},
            "edges": [
                {"source": a, "target": b, **m.to_dict()}
                for (a, b), m in sorted(self.edges.items())
            ],
            "start_counts": dict(sorted(self.start_counts.items())),
            "end_counts": dict(sorted(self.end_counts.items())),
            "negative_waits": self.negative_waits,
        }


def build_dfg(log: EventLog) -> Dfg:
    node_abs: Counter[str] = Counter()
    node_cases: Counter[str] = Counter()
    node_max_rep: dict[str, int] = {}
    edge_abs: Counter[tuple[str, str]] = Counter()
    edge_cases: Counter[tuple[str, str]] = Counter()
    edge_waits: dict[tuple[str, str], list[float]] = defaultdict(list)
    starts: Counter[str] = Counter()
    ends: Counter[str] = Counter()
    negative = 0

    for case in log.cases:
        if not case.events:
            continue
        per_case = Counter(case.activity_sequence())
        for activity, n in per_case.items():
            node_abs[activity] += n
            node_cases[activity] += 1
            node_max_rep[activity] = max(node_max_rep.get(activity, 0), n)
        starts[case.events[0].activity] += 1
        ends[case.events[-1].activity] += 1
        seen_edges = set()
        for prev, nxt in zip(case.events, case.events[1:]):
            pair = (prev.activity, nxt.activity)
            edge_abs[pair] += 1
            seen_edges.add(pair)
            depart = prev.complete_ts if prev.complete_ts is not None else prev.start_ts
            wait = nxt.start_ts - depart
            if wait < 0:
                wait = 0
                negative += 1
            edge_waits[pair].append(float(wait))
        for pair in seen_edges:
            edge_cases[pair] += 1

    nodes = {
        a: NodeStats(node_abs[a], node_cases[a], node_max_rep[a]) for a in node_abs
    }
    edges = {}
    for pair, count in edge_abs.items():
        waits = edge_waits[pair]
        edges[pair] = EdgeMetrics(
            absolute_freq=count,
            case_freq=edge_cases[pair],
            durations=duration_stats(waits),
            total_duration=sum(waits),
        )
    return Dfg(
        nodes=nodes,
        edges=edges,
        start_counts=dict(starts),
        end_counts=dict(ends),
        negative_waits=negative,
    )


def simplify_dfg(dfg: Dfg, activity_pct: float, path_pct: float) -> Dfg:
    """Rank-based slider semantics.

    Keeps the top ceil(activity_pct * activities) activities by frequency,
    the top ceil(path_pct * edges-between-kept) edges by frequency, then
    repairs connectivity: a kept node that had incoming (outgoing) edges
    among kept activities but lost them all gets its single most frequent
    one back. (1.0, 1.0) is the identity.
    """
    for pct, name in ((activity_pct, "activity_pct"), (path_pct, "path_pct")):
        if not 0.0 <= pct <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {pct}")

    ranked_nodes = sorted(dfg.nodes.items(), key=lambda kv: (-kv[1].absolute_freq, kv[0]))
    keep_n = math.ceil(activity_pct * len(ranked_nodes))
    kept_acts = {a for a, _ in ranked_nodes[:keep_n]}

    candidate_edges = {
        pair: m for pair, m in dfg.edges.items() if pair[0] in kept_acts and pair[1] in kept_acts
    }
    ranked_edges = sorted(candidate_edges.items(), key=lambda kv: (-kv[1].absolute_freq, kv[0]))
    keep_e = math.ceil(path_pct * len(ranked_edges))
    kept_edges = {pair for pair, _ in ranked_edges[:keep_e]}

    # connectivity repair against the full candidate edge set
    incoming: dict[str, list[tuple[str, str]]] = defaultdict(list)
    outgoing: dict[str, list[tuple[str, str]]] = defaultdict(list)
    for pair in candidate_edges:
        outgoing[pair[0]].append(pair)
        incoming[pair[1]].append(pair)

    def best(pairs: list[tuple[str, str]]) -> tuple[str, str]:
        return min(pairs, key=lambda p: (-candidate_edges[p].absolute_freq, p))

    for activity in sorted(kept_acts):
        if incoming[activity] and not any(p in kept_edges for p in incoming[activity]):
            kept_edges.add(best(incoming[activity]))
        if outgoing[activity] and not any(p in kept_edges for p in outgoing[activity]):
            kept_edges.add(best(outgoing[activity]))

    return Dfg(
        nodes={a: s for a, s in dfg.nodes.items() if a in kept_acts},
        edges={pair: candidate_edges[pair] for pair in kept_edges},
        start_counts={a: n for a, n in dfg.start_counts.items() if a in kept_acts},
        end_counts={a: n for a, n in dfg.end_counts.items() if a in kept_acts},
        negative_waits=dfg.negative_waits,
    )


class Relation(str, Enum):
    CAUSAL_RIGHT = "->"
    CAUSAL_LEFT = "<-"
    PARALLEL = "||"
    CHOICE = "#"


@dataclass(frozen=True)
class FootprintMatrix:
    activities: tuple[str, ...]
    relations: Mapping[tuple[str, str], Relation]

    def relation(self, a: str, b: str) -> Relation:
        return self.relations[(a, b)]

    def to_dict(self) -> dict:
        return {
            "activities": list(self.activities),
            "relations": [
                {"source": a, "target": b, "relation": r.value}
                for (a, b), r in sorted(self.relations.items())
            ],
        }


def footprint_from_counts(activities: list[str], counts: Mapping[tuple[str, str], int]) -> FootprintMatrix:
    relations: dict[tuple[str, str], Relation] = {}
    for a in activities:
        for b in activities:
            ab = counts.get((a, b), 0)
            ba = counts.get((b, a), 0)
            if ab > 0 and ba == 0:
                relations[(a, b)] = Relation.CAUSAL_RIGHT
            elif ab == 0 and ba > 0:
                relations[(a, b)] = Relation.CAUSAL_LEFT
            elif ab > 0 and ba > 0:
                relations[(a, b)] = Relation.PARALLEL
            else:
                relations[(a, b)] = Relation.CHOICE
    return FootprintMatrix(activities=tuple(sorted(activities)), relations=relations)


def footprint(log: EventLog) -> FootprintMatrix:
    """Directly-follows relations: ->, <-, || and # per ordered pair.

    A self loop (|a>a| > 0) shows up as parallel; that is the classic Alpha
    short-loop blind spot, surfaced rather than patched.
    """
    dfg = build_dfg(log)
    counts = {pair: m.absolute_freq for pair, m in dfg.edges.items()}
    return footprint_from_counts(sorted(dfg.nodes), counts)


@dataclass(frozen=True)
class PetriNet:
    places: tuple[str, ...]
    transitions: tuple[str, ...]
    arcs: tuple[tuple[str, str], ...]
    initial_marking: Mapping[str, int]
    final_marking: Mapping[str, int]
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "places": list(self.places),
            "transitions": list(self.transitions),
            "arcs": [{"source": a, "target": b} for a, b in self.arcs],
            "initial_marking": dict(self.initial_marking),
            "final_marking": dict(self.final_marking),
            "notes": list(self.notes),
        }


def _place_id(pre: frozenset[str], post: frozenset[str]) -> str:
    return "p#(" + "+".join(sorted(pre)) + ")->(" + "+".join(sorted(post)) + ")"


def alpha_miner(log: EventLog) -> PetriNet:
    """Classic Alpha construction over the footprint.

    Maximal (A, B) pairs with every a->b causal and both sides internally in
    choice become places; the unique source and sink places carry the initial
    and final marking. Short-loop patterns the construction cannot express
    are flagged in notes.
    """
    fp = footprint(log)
    activities = list(fp.activities)
    starts = {c.events[0].activity for c in log.cases if c.events}
    ends = {c.events[-1].activity for c in log.cases if c.events}

    causal: dict[str, set[str]] = defaultdict(set)
    independent: dict[str, set[str]] = defaultdict(set)
    notes: list[str] = []
    for a in activities:
        for b in activities:
            rel = fp.relation(a, b)
            if rel is Relation.CAUSAL_RIGHT:
                causal[a].add(b)
            elif rel is Relation.CHOICE:
                independent[a].add(b)
    for a in activities:
        if fp.relation(a, a) is Relation.PARALLEL:
            notes.append(f"length-one loop at {a!r} is outside the Alpha class")

    def choice_set(acts: frozenset[str]) -> bool:
        return all(y in independent[x] for x in acts for y in acts)

    def all_causal(pre: frozenset[str], post: frozenset[str]) -> bool:
        return all(b in causal[a] for a in pre for b in post)

    pairs: set[tuple[frozenset[str], frozenset[str]]] = set()
    frontier: list[tuple[frozenset[str], frozenset[str]]] = []
    for a in activities:
        for b in causal[a]:
            seed = (frozenset([a]), frozenset([b]))
            pairs.add(seed)
            frontier.append(seed)
    while frontier:
        pre, post = frontier.pop()
        for x in activities:
            if x not in pre:
                grown = pre | {x}
                if choice_set(grown) and all_causal(grown, post):
                    candidate = (frozenset(grown), post)
                    if candidate not in pairs:
                        pairs.add(candidate)
                        frontier.append(candidate)
            if x not in post:
                grown_post = post | {x}
                if choice_set(grown_post) and all_causal(pre, grown_post):
                    candidate = (pre, frozenset(grown_post))
                    if candidate not in pairs:
                        pairs.add(candidate)
                        frontier.append(candidate)

    maximal = [
        (pre, post)
        for pre, post in pairs
        if not any(
            (pre <= p2 and post <= q2) and (pre, post) != (p2, q2) for p2, q2 in pairs
        )
    ]
    maximal.sort(key=lambda pq: (sorted(pq[0]), sorted(pq[1])))

    places = [SOURCE_PLACE] + [_place_id(pre, post) for pre, post in maximal] + [SINK_PLACE]
    arcs: list[tuple[str, str]] = []
    for t in sorted(starts):
        arcs.append((SOURCE_PLACE, t))
    for pre, post in maximal:
        pid = _place_id(pre, post)
        for a in sorted(pre):
            arcs.append((a, pid))
        for b in sorted(post):
            arcs.append((pid, b))
    for t in sorted(ends):
        arcs.append((t, SINK_PLACE))

    return PetriNet(
        places=tuple(places),
        transitions=tuple(activities),
        arcs=tuple(arcs),
        initial_marking={SOURCE_PLACE: 1},
        final_marking={SINK_PLACE: 1},
        notes=tuple(notes),
    )


@dataclass(frozen=True)
class DependencyMatrix:
    activities: tuple[str, ...]
    values: Mapping[tuple[str, str], float]

    def value(self, a: str, b: str) -> float:
        return self.values[(a, b)]

    def to_dict(self) -> dict:
        return {
            "activities": list(self.activities),
            "values": [
                {"source": a, "target": b, "dep": v} for (a, b), v in sorted(self.values.items())
            ],
        }


def dependency_matrix(log: EventLog) -> DependencyMatrix:
    """Heuristics-style causal confidence (|a>b| - |b>a|) / (|a>b| + |b>a| + 1)."""
    dfg = build_dfg(log)
    counts = {pair: m.absolute_freq for pair, m in dfg.edges.items()}
    activities = sorted(dfg.nodes)
    values = {}
    for a in activities:
        for b in activities:
            ab = counts.get((a, b), 0)
            ba = counts.get((b, a), 0)
            values[(a, b)] = (ab - ba) / (ab + ba + 1)
    return DependencyMatrix(activities=tuple(activities), values=values)


@dataclass(frozen=True)
class RepetitionStats:
    max_per_case: int
    cases_with_repeats: int

    def to_dict(self) -> dict:
        return {"max_per_case": self.max_per_case, "cases_with_repeats": self.cases_with_repeats}


def max_repetitions(log: EventLog) -> dict[str, RepetitionStats]:
    max_per: dict[str, int] = {}
    repeats: Counter[str] = Counter()
    for case in log.cases:
        per_case = Counter(case.activity_sequence())
        for activity, n in per_case.items():
            max_per[activity] = max(max_per.get(activity, 0), n)
            if n >= 2:
                repeats[activity] += 1
    return {
        a: RepetitionStats(max_per_case=max_per[a], cases_with_repeats=repeats[a])
        for a in sorted(max_per)
    }


def cooccurrence_clusters(log: EventLog, threshold: float = 0.5) -> list[frozenset[str]]:
    """Order-insensitive activity grouping.

    Two activities link when the Jaccard overlap of their case sets reaches
    the threshold; clusters are the connected components of that link graph
    and always partition the activity set.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    case_sets: dict[str, set[str]] = defaultdict(set)
    for case in log.cases:
        for event in case.events:
            case_sets[event.activity].add(case.case_id)
    activities = sorted(case_sets)

    parent = {a: a for a in activities}

    def find(a: str) -> str:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: str, b: str) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for i, a in enumerate(activities):
        for b in activities[i + 1:]:
            both = len(case_sets[a] & case_sets[b])
            either = len(case_sets[a] | case_sets[b])
            if either and both / either >= threshold:
                union(a, b)

    groups: dict[str, set[str]] = defaultdict(set)
    for a in activities:
        groups[find(a)].add(a)
    return sorted((frozenset(g) for g in groups.values()), key=lambda g: sorted(g)[0])
