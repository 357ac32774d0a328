// End-to-end smoke against the real backend: spawns the API server, uploads
// the three-row registrations sample, and checks the explorer view models
// see exactly what the acceptance contract expects.

import { spawn, type ChildProcess } from "node:child_process";
import { readFileSync } from "node:fs";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { TIMEFRAME_MODES } from "../src/filters.js";
import { buildMapViewModel, END_ID, START_ID } from "../src/map.js";
import { tokensAt } from "../src/replay.js";

const PORT = 18_765;
const BASE = `http://127.0.0.1:${PORT}`;
const FIXTURE = new URL("../../tests/fixtures/table13.csv", import.meta.url);
const CONFIG = new URL("../../tests/fixtures/table13_config.json", import.meta.url);

let server: ChildProcess;

async function waitForServer(timeoutMs = 30_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/api/v1/logs/probe/summary`);
      if (response.status === 404) return; // up: unknown snapshot is expected
    } catch {
      // not listening yet
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error("backend did not come up in time");
}

beforeAll(async () => {
  server = spawn("python3", ["-m", "flowbench.cli", "serve", "--bind", `127.0.0.1:${PORT}`], {
    stdio: "ignore",
  });
  await waitForServer();
}, 40_000);

afterAll(() => {
  server?.kill();
});

describe("explorer against the live API", () => {
  const client = new ApiClient(BASE);
  let snapshot = "";

  it("uploads the registrations sample", async () => {
    const csv = readFileSync(FIXTURE);
    const config = JSON.parse(readFileSync(CONFIG, "utf-8"));
    const info = await client.upload(new Blob([csv]), "table13.csv", config);
    expect(info.events).toBe(3);
    expect(info.cases).toBe(3);
    snapshot = info.snapshot;
  }, 15_000);

  it("map view at sliders (100, 100) shows 3 activity nodes plus START/END", async () => {
    const dfg = await client.dfg(snapshot, 100, 100);
    const model = buildMapViewModel(dfg, "frequency");
    const activities = model.nodes.filter((n) => n.kind === "activity");
    expect(activities).toHaveLength(3);
    expect(model.nodes.some((n) => n.id === START_ID)).toBe(true);
    expect(model.nodes.some((n) => n.id === END_ID)).toBe(true);
    expect(dfg.edges).toHaveLength(0);
  }, 15_000);

  it("filter panel offers exactly the five timeframe modes, all accepted by the API", async () => {
    expect(TIMEFRAME_MODES).toHaveLength(5);
    for (const mode of TIMEFRAME_MODES) {
      const info = await client.applyFilters(snapshot, [
        { type: "timeframe", mode, start: 0, end: 4_102_444_800_000 },
      ]);
      expect(info.snapshot).toBeTruthy();
    }
  }, 20_000);

  it("replay shows 3 tokens", async () => {
    const stream = await client.replay(snapshot);
    expect(stream.token_count).toBe(3);
    const starts = new Set(stream.hops.map((h) => h.depart_ts));
    const seen = new Set<string>();
    for (const position of starts) {
      for (const frame of tokensAt(stream, position)) seen.add(frame.tokenId);
    }
    expect(seen.size).toBe(3);
  }, 15_000);

  it("summary numbers come from the API, not local computation", async () => {
    const summary = await client.summary(snapshot);
    expect(summary).toMatchObject({ events: 3, cases: 3, activities: 3, resources: 2 });
    expect(summary.case_duration.max_ms).toBe(0);
  }, 15_000);
});
