import { describe, expect, it } from "vitest";

import type { DfgJson } from "../src/api.js";
import { buildMapViewModel, END_ID, START_ID } from "../src/map.js";

const chain: DfgJson = {
  nodes: {
    a: { absolute_freq: 10, case_freq: 10, max_repetitions: 1 },
    b: { absolute_freq: 5, case_freq: 5, max_repetitions: 1 },
    c: { absolute_freq: 5, case_freq: 5, max_repetitions: 1 },
  },
  edges: [
    { source: "a", target: "b", absolute_freq: 5, case_freq: 5, total_ms: 4_320_000_000, mean_ms: 864_000_000, median_ms: 864_000_000, max_ms: 864_000_000 },
    { source: "b", target: "c", absolute_freq: 5, case_freq: 5, total_ms: 0, mean_ms: 0, median_ms: 0, max_ms: 0 },
  ],
  start_counts: { a: 10 },
  end_counts: { a: 5, c: 5 },
  negative_waits: 0,
};

const empty: DfgJson = {
  nodes: {},
  edges: [],
  start_counts: {},
  end_counts: {},
  negative_waits: 0,
};

describe("process-map view model", () => {
  it("always carries START and END markers", () => {
    const model = buildMapViewModel(chain, "frequency");
    const kinds = new Map(model.nodes.map((n) => [n.id, n.kind]));
    expect(kinds.get(START_ID)).toBe("start");
    expect(kinds.get(END_ID)).toBe("end");
  });

  it("activity node count matches the payload", () => {
    const model = buildMapViewModel(chain, "frequency");
    expect(model.nodes.filter((n) => n.kind === "activity")).toHaveLength(3);
  });

  it("shading scales with frequency, 1.0 for the most frequent", () => {
    const model = buildMapViewModel(chain, "frequency");
    const shade = new Map(model.nodes.map((n) => [n.id, n.shade]));
    expect(shade.get("a")).toBe(1);
    expect(shade.get("b")).toBe(0.5);
  });

  it("metric toggle relabels edges without changing the layout", () => {
    const freq = buildMapViewModel(chain, "frequency");
    const mean = buildMapViewModel(chain, "mean_duration");
    expect(mean.nodes).toEqual(freq.nodes);
    const freqLabels = freq.edges.map((e) => e.label);
    const meanLabels = mean.edges.map((e) => e.label);
    expect(freqLabels).not.toEqual(meanLabels);
    expect(meanLabels).toContain("10 days");
    expect(freq.edges.map((e) => [e.source, e.target])).toEqual(
      mean.edges.map((e) => [e.source, e.target]),
    );
  });

  it("start and end edges carry the case counts", () => {
    const model = buildMapViewModel(chain, "frequency");
    const startEdge = model.edges.find((e) => e.source === START_ID);
    expect(startEdge).toMatchObject({ target: "a", label: "10" });
    const endEdges = model.edges.filter((e) => e.target === END_ID);
    expect(endEdges.map((e) => e.source).sort()).toEqual(["a", "c"]);
  });

  it("layers follow the flow direction", () => {
    const model = buildMapViewModel(chain, "frequency");
    const layer = new Map(model.nodes.map((n) => [n.id, n.layer]));
    expect(layer.get(START_ID)).toBe(0);
    expect(layer.get("a")!).toBeLessThan(layer.get("b")!);
    expect(layer.get("b")!).toBeLessThan(layer.get(END_ID)!);
  });

  it("renders an explicit empty state", () => {
    const model = buildMapViewModel(empty, "frequency");
    expect(model.empty).toBe(true);
    expect(model.nodes.map((n) => n.kind).sort()).toEqual(["end", "start"]);
  });
});
