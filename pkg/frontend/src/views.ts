// View renderers: each projects API JSON plus view state into DOM. All
// numbers shown come straight from the API payloads.

import type {
  DfgJson,
  DottedJson,
  FrequencyJson,
  QualityJson,
  ReplayJson,
  SeriesJson,
  SocialJson,
  SummaryJson,
  VariantsJson,
} from "./api.js";
import { clear, el, svg } from "./dom.js";
import { dottedViewModel } from "./dotted.js";
import { formatDuration, formatPercent, formatTimestamp } from "./format.js";
import { buildMapViewModel, END_ID, START_ID, type MapViewModel } from "./map.js";
import { ringLayout } from "./social.js";
import type { MapMetric } from "./state.js";

export function renderSummary(
  container: Element,
  summary: SummaryJson,
  frequency: FrequencyJson,
  overtime: SeriesJson,
  variants: VariantsJson,
  quality: QualityJson,
): void {
  clear(container);
  const cards = el("div", { class: "cards" });
  const card = (label: string, value: string) =>
    cards.append(
      el("div", { class: "card" }, el("div", { class: "card-value" }, value), el("div", { class: "card-label" }, label)),
    );
  card("events", String(summary.events));
  card("cases", String(summary.cases));
  card("activities", String(summary.activities));
  card("resources", String(summary.resources));
  card("mean case duration", summary.case_duration.mean);
  card("median case duration", summary.case_duration.median);
  card("first event", formatTimestamp(summary.first_ts));
  card("last event", formatTimestamp(summary.last_ts));
  card("log maturity band", String(quality.maturity_band));
  container.append(cards);

  const freqTable = el("table", { class: "table" });
  freqTable.append(
    el("tr", {}, el("th", {}, frequency.dimension), el("th", {}, "absolute"), el("th", {}, "relative")),
  );
  for (const row of frequency.rows.slice(0, 15)) {
    freqTable.append(
      el(
        "tr",
        {},
        el("td", {}, row.label),
        el("td", {}, String(row.absolute)),
        el("td", {}, formatPercent(row.relative)),
      ),
    );
  }
  container.append(el("h3", {}, "most frequent"), freqTable);

  if (overtime.series.length) {
    const max = Math.max(...overtime.series.map((p) => p.count));
    const chart = svg("svg", { viewBox: "0 0 600 120", class: "overtime" });
    const barWidth = 600 / overtime.series.length;
    overtime.series.forEach((point, i) => {
      const height = max > 0 ? (point.count / max) * 100 : 0;
      const bar = svg("rect", {
        x: String(i * barWidth + 1),
        y: String(110 - height),
        width: String(Math.max(1, barWidth - 2)),
        height: String(height),
        fill: "#4c78a8",
      });
      bar.append(svg("title", {}, `${point.bucket}: ${point.count}`));
      chart.append(bar);
    });
    container.append(el("h3", {}, `${overtime.unit} over time (${overtime.bucket})`), chart);
  }

  const variantsTable = el("table", { class: "table" });
  variantsTable.append(
    el("tr", {}, el("th", {}, "variant"), el("th", {}, "cases"), el("th", {}, "cumulative")),
  );
  for (const variant of variants.variants.slice(0, 10)) {
    variantsTable.append(
      el(
        "tr",
        {},
        el("td", {}, variant.sequence.join(" → ")),
        el("td", {}, String(variant.case_count)),
        el("td", {}, formatPercent(variant.cumulative_coverage)),
      ),
    );
  }
  container.append(el("h3", {}, "variants"), variantsTable);
}

export interface MapGeometry {
  model: MapViewModel;
  positions: Map<string, { x: number; y: number }>;
  width: number;
  height: number;
}

export function computeMapGeometry(dfg: DfgJson, metric: MapMetric): MapGeometry {
  const model = buildMapViewModel(dfg, metric);
  const perLayer = new Map<number, number>();
  for (const node of model.nodes) {
    perLayer.set(node.layer, Math.max(perLayer.get(node.layer) ?? 0, node.slot + 1));
  }
  const widest = Math.max(...perLayer.values(), 1);
  const width = Math.max(640, widest * 190);
  const height = model.layerCount * 110 + 40;
  const positions = new Map<string, { x: number; y: number }>();
  for (const node of model.nodes) {
    const slots = perLayer.get(node.layer) ?? 1;
    const x = ((node.slot + 1) * width) / (slots + 1);
    const y = 60 + node.layer * 110;
    positions.set(node.id, { x, y });
  }
  return { model, positions, width, height };
}

export function renderMap(container: Element, geometry: MapGeometry): SVGElement {
  clear(container);
  const { model, positions, width, height } = geometry;
  const root = svg("svg", { viewBox: `0 0 ${width} ${height}`, class: "map" });
  const defs = svg("defs");
  const marker = svg("marker", {
    id: "arrow",
    viewBox: "0 0 10 10",
    refX: "9",
    refY: "5",
    markerWidth: "7",
    markerHeight: "7",
    orient: "auto-start-reverse",
  });
  marker.append(svg("path", { d: "M 0 0 L 10 5 L 0 10 z", fill: "#666" }));
  defs.append(marker);
  root.append(defs);

  for (const edge of model.edges) {
    const from = positions.get(edge.source);
    const to = positions.get(edge.target);
    if (!from || !to) continue;
    root.append(
      svg("line", {
        x1: String(from.x),
        y1: String(from.y + 18),
        x2: String(to.x),
        y2: String(to.y - 22),
        stroke: "#666",
        "stroke-width": "1.2",
        "marker-end": "url(#arrow)",
        class: "map-edge",
        "data-edge": `${edge.source}→${edge.target}`,
      }),
    );
    root.append(
      svg(
        "text",
        {
          x: String((from.x + to.x) / 2 + 4),
          y: String((from.y + to.y) / 2),
          class: "edge-label",
        },
        edge.label,
      ),
    );
  }

  for (const node of model.nodes) {
    const pos = positions.get(node.id)!;
    if (node.kind === "start") {
      root.append(
        svg("path", {
          d: `M ${pos.x - 14} ${pos.y - 12} L ${pos.x + 14} ${pos.y} L ${pos.x - 14} ${pos.y + 12} Z`,
          fill: "#54a24b",
          class: "map-start",
        }),
      );
    } else if (node.kind === "end") {
      root.append(
        svg("circle", { cx: String(pos.x), cy: String(pos.y), r: "13", fill: "none", stroke: "#e45756", "stroke-width": "3", class: "map-end" }),
      );
      root.append(svg("circle", { cx: String(pos.x), cy: String(pos.y), r: "8", fill: "#e45756" }));
    } else {
      const blue = Math.round(235 - node.shade * 160);
      root.append(
        svg("rect", {
          x: String(pos.x - 80),
          y: String(pos.y - 16),
          width: "160",
          height: "34",
          rx: "5",
          fill: `rgb(${blue - 30}, ${blue}, 235)`,
          stroke: "#335",
          class: "map-node",
          "data-activity": node.id,
        }),
      );
      root.append(
        svg(
          "text",
          { x: String(pos.x), y: String(pos.y + 5), "text-anchor": "middle", class: "node-label" },
          node.label.length > 24 ? `${node.label.slice(0, 23)}…` : node.label,
        ),
      );
    }
  }
  if (model.empty) {
    root.append(
      svg("text", { x: String(width / 2), y: "30", "text-anchor": "middle", class: "empty-note" }, "empty graph — adjust filters or upload a log"),
    );
  }
  container.append(root);
  return root;
}

export function renderDotted(container: Element, chart: DottedJson): void {
  clear(container);
  const model = dottedViewModel(chart);
  const height = Math.max(160, Math.min(640, model.rowCount * 8 + 40));
  const root = svg("svg", { viewBox: `0 0 800 ${height}`, class: "dotted" });
  for (const point of model.points) {
    root.append(
      svg("circle", {
        cx: String(20 + point.x * 760),
        cy: String(20 + point.y * (height - 40)),
        r: "2.4",
        fill: point.color,
        class: "dot",
      }),
    );
  }
  container.append(root);
  const legend = el("div", { class: "legend" });
  for (const [category, color] of model.categories) {
    const chip = el("span", { class: "chip" }, category);
    chip.style.borderColor = color;
    legend.append(chip);
  }
  container.append(legend);
}

export function renderSocial(container: Element, net: SocialJson): void {
  clear(container);
  const width = 720;
  const height = 520;
  const nodes = ringLayout(net, width, height);
  const byId = new Map(nodes.map((n) => [n.id, n]));
  const root = svg("svg", { viewBox: `0 0 ${width} ${height}`, class: "social" });
  for (let band = 1; band <= 5; band++) {
    root.append(
      svg("circle", {
        cx: String(width / 2),
        cy: String(height / 2),
        r: String(((Math.min(width, height) / 2 - 30) * band) / 5),
        fill: "none",
        stroke: "#eee",
      }),
    );
  }
  const maxWeight = Math.max(1, ...net.edges.map((e) => e.weight));
  for (const edge of net.edges) {
    const from = byId.get(edge.source);
    const to = byId.get(edge.target);
    if (!from || !to) continue;
    root.append(
      svg("line", {
        x1: String(from.x),
        y1: String(from.y),
        x2: String(to.x),
        y2: String(to.y),
        stroke: "#99b",
        "stroke-width": String(0.5 + (edge.weight / maxWeight) * 3),
        class: "social-edge",
      }),
    );
  }
  for (const node of nodes) {
    root.append(
      svg("circle", {
        cx: String(node.x),
        cy: String(node.y),
        r: "7",
        fill: node.degree > 0 ? "#4c78a8" : "#bbb",
        class: "social-node",
        "data-resource": node.id,
      }),
    );
    root.append(
      svg("text", { x: String(node.x + 9), y: String(node.y + 4), class: "node-label" }, node.id),
    );
  }
  container.append(root);
  container.append(
    el(
      "p",
      { class: "note" },
      `${net.nodes.length} resources, ${net.edges.length} edges; band 1 is the innermost ring${
        net.skipped_pairs ? `; ${net.skipped_pairs} handovers skipped (missing or equal resources)` : ""
      }`,
    ),
  );
}

export function describeReplay(stream: ReplayJson): string {
  return `${stream.token_count} tokens, ${stream.hops.length} hops`;
}
