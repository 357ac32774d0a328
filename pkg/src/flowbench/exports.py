"""Deterministic text exports: Graphviz DOT for graphs and CSV for dotted
charts. Identical inputs produce byte-identical output; nodes and edges are
emitted in sorted order."""

from __future__ import annotations

import io
import csv

from .discover import Dfg, PetriNet, SINK_PLACE, SOURCE_PLACE
from .social import SocialNetwork
from .stats import DottedChart, humanize_ms

START_NODE = "__start__"
END_NODE = "__end__"

_DFG_METRICS = ("frequency", "mean_duration", "total_duration")


class MetricMismatchError(ValueError):
    def __init__(self, metric: str, kind: str):
        super().__init__(f"metric {metric!r} not valid for {kind}")
        self.metric = metric
        self.kind = kind


def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _dfg_edge_label(metrics, metric: str) -> str:
    if metric == "frequency":
        return str(metrics.absolute_freq)
    if metric == "mean_duration":
        return humanize_ms(metrics.durations.mean)
    return humanize_ms(metrics.total_duration)


def _dot_dfg(dfg: Dfg, metric: str) -> str:
    if metric not in _DFG_METRICS:
        raise MetricMismatchError(metric, "Dfg")
    lines = ["digraph dfg {", "  rankdir=TB;"]
    lines.append(f"  {_q(START_NODE)} [label=\"START\" shape=triangle];")
    lines.append(f"  {_q(END_NODE)} [label=\"END\" shape=doublecircle];")
    for activity in sorted(dfg.nodes):
        stats = dfg.nodes[activity]
        lines.append(f"  {_q(activity)} [label={_q(f'{activity} ({stats.absolute_freq})')} shape=box];")
    for activity in sorted(dfg.start_counts):
        lines.append(f"  {_q(START_NODE)} -> {_q(activity)} [label=\"{dfg.start_counts[activity]}\"];")
    for (a, b) in sorted(dfg.edges):
        label = _dfg_edge_label(dfg.edges[(a, b)], metric)
        lines.append(f"  {_q(a)} -> {_q(b)} [label={_q(label)}];")
    for activity in sorted(dfg.end_counts):
        lines.append(f"  {_q(activity)} -> {_q(END_NODE)} [label=\"{dfg.end_counts[activity]}\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_petri(net: PetriNet, metric: str) -> str:
    if metric != "frequency":
        raise MetricMismatchError(metric, "PetriNet")
    lines = ["digraph petri {", "  rankdir=LR;"]
    for place in sorted(net.places):
        if place == SOURCE_PLACE:
            shape = 'shape=circle label="start" penwidth=2'
        elif place == SINK_PLACE:
            shape = 'shape=doublecircle label="end"'
        else:
            shape = 'shape=circle label=""'
        lines.append(f"  {_q(place)} [{shape}];")
    for transition in sorted(net.transitions):
        lines.append(f"  {_q('t#' + transition)} [label={_q(transition)} shape=box];")
    for source, target in sorted(net.arcs):
        src = source if source in net.places else "t#" + source
        dst = target if target in net.places else "t#" + target
        lines.append(f"  {_q(src)} -> {_q(dst)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_social(net: SocialNetwork, metric: str) -> str:
    if metric != "weight":
        raise MetricMismatchError(metric, "SocialNetwork")
    kind = "digraph" if net.directed else "graph"
    arrow = "->" if net.directed else "--"
    lines = [f"{kind} social {{"]
    for node in sorted(net.nodes):
        lines.append(f"  {_q(node)};")
    for (i, j) in sorted(net.edges):
        weight = net.edges[(i, j)]
        label = str(int(weight)) if float(weight).is_integer() else f"{weight:.3f}"
        lines.append(f"  {_q(i)} {arrow} {_q(j)} [label=\"{label}\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(graph, label_metric: str = "frequency") -> str:
    """DOT text for a Dfg (frequency | mean_duration | total_duration),
    PetriNet (frequency) or SocialNetwork (weight)."""
    if isinstance(graph, Dfg):
        return _dot_dfg(graph, label_metric)
    if isinstance(graph, PetriNet):
        return _dot_petri(graph, label_metric)
    if isinstance(graph, SocialNetwork):
        return _dot_social(graph, label_metric)
    raise TypeError(f"cannot export {type(graph).__name__} as DOT")


def dotted_chart_csv(chart: DottedChart) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["row_index", "x", "category"])
    for point in chart.points:
        writer.writerow([point.row_index, point.x, point.category])
    return out.getvalue()
