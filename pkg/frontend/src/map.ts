// Process-map view model: layered layout plus frequency shading. Slider
// changes re-query the server (the keep rule lives there, not here); this
// module only arranges what the API returned.

import type { DfgJson } from "./api.js";
import { formatDuration } from "./format.js";
import type { MapMetric } from "./state.js";

export const START_ID = "__start__";
export const END_ID = "__end__";

export interface MapNode {
  id: string;
  label: string;
  kind: "start" | "end" | "activity";
  freq: number;
  shade: number; // 0..1, scales with frequency
  layer: number;
  slot: number; // position within the layer
}

export interface MapEdge {
  source: string;
  target: string;
  label: string;
  freq: number;
}

export interface MapViewModel {
  nodes: MapNode[];
  edges: MapEdge[];
  layerCount: number;
  empty: boolean;
}

function edgeLabel(edge: { absolute_freq: number; mean_ms: number; total_ms: number }, metric: MapMetric): string {
  if (metric === "frequency") return String(edge.absolute_freq);
  if (metric === "mean_duration") return formatDuration(edge.mean_ms);
  return formatDuration(edge.total_ms);
}

/** Breadth-first layering from the start activities; unreachable activities
 * end up on a trailing layer so nothing vanishes from the drawing. */
function assignLayers(dfg: DfgJson): Map<string, number> {
  const layers = new Map<string, number>();
  const outgoing = new Map<string, string[]>();
  for (const edge of dfg.edges) {
    const list = outgoing.get(edge.source) ?? [];
    list.push(edge.target);
    outgoing.set(edge.source, list);
  }
  let frontier = Object.keys(dfg.start_counts).sort();
  for (const activity of frontier) layers.set(activity, 1);
  let depth = 1;
  while (frontier.length) {
    depth += 1;
    const next: string[] = [];
    for (const activity of frontier) {
      for (const target of outgoing.get(activity) ?? []) {
        if (!layers.has(target)) {
          layers.set(target, depth);
          next.push(target);
        }
      }
    }
    frontier = next.sort();
  }
  const trailing = depth + 1;
  for (const activity of Object.keys(dfg.nodes)) {
    if (!layers.has(activity)) layers.set(activity, trailing);
  }
  return layers;
}

export function buildMapViewModel(dfg: DfgJson, metric: MapMetric): MapViewModel {
  const activities = Object.keys(dfg.nodes).sort();
  const maxFreq = Math.max(0, ...activities.map((a) => dfg.nodes[a]!.absolute_freq));
  const layers = assignLayers(dfg);
  const lastLayer = Math.max(1, ...layers.values()) + 1;

  const byLayer = new Map<number, string[]>();
  for (const activity of activities) {
    const layer = layers.get(activity) ?? lastLayer - 1;
    const list = byLayer.get(layer) ?? [];
    list.push(activity);
    byLayer.set(layer, list);
  }

  const nodes: MapNode[] = [
    { id: START_ID, label: "START", kind: "start", freq: 0, shade: 0, layer: 0, slot: 0 },
  ];
  for (const [layer, members] of [...byLayer.entries()].sort((a, b) => a[0] - b[0])) {
    members.sort();
    members.forEach((activity, slot) => {
      const freq = dfg.nodes[activity]!.absolute_freq;
      nodes.push({
        id: activity,
        label: `${activity} (${freq})`,
        kind: "activity",
        freq,
        shade: maxFreq > 0 ? freq / maxFreq : 0,
        layer,
        slot,
      });
    });
  }
  nodes.push({ id: END_ID, label: "END", kind: "end", freq: 0, shade: 0, layer: lastLayer, slot: 0 });

  const edges: MapEdge[] = [];
  for (const [activity, count] of Object.entries(dfg.start_counts).sort()) {
    edges.push({ source: START_ID, target: activity, label: String(count), freq: count });
  }
  for (const edge of [...dfg.edges].sort((a, b) =>
    a.source === b.source ? a.target.localeCompare(b.target) : a.source.localeCompare(b.source),
  )) {
    edges.push({
      source: edge.source,
      target: edge.target,
      label: edgeLabel(edge, metric),
      freq: edge.absolute_freq,
    });
  }
  for (const [activity, count] of Object.entries(dfg.end_counts).sort()) {
    edges.push({ source: activity, target: END_ID, label: String(count), freq: count });
  }

  return {
    nodes,
    edges,
    layerCount: lastLayer + 1,
    empty: activities.length === 0,
  };
}
