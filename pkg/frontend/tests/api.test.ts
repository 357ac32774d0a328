import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError, makeLatestGate } from "../src/api.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

afterEach(() => {
  vi.restoreAllMocks();
});

describe("api client", () => {
  it("converts UI slider percentages to API fractions", async () => {
    const fetchMock = vi
      .spyOn(globalThis, "fetch")
      .mockResolvedValue(jsonResponse({ nodes: {}, edges: [], start_counts: {}, end_counts: {}, negative_waits: 0 }));
    const client = new ApiClient("http://api.test");
    await client.dfg("snap", 100, 35);
    const requested = new URL(fetchMock.mock.calls[0]![0] as string);
    expect(requested.pathname).toBe("/api/v1/logs/snap/dfg");
    expect(requested.searchParams.get("activities")).toBe("1");
    expect(requested.searchParams.get("paths")).toBe("0.35");
  });

  it("posts filter pipelines as JSON", async () => {
    const fetchMock = vi
      .spyOn(globalThis, "fetch")
      .mockResolvedValue(jsonResponse({ snapshot: "x", name: "n", events: 0, cases: 0, parent: null, pipeline: [] }));
    const client = new ApiClient("http://api.test");
    await client.applyFilters("snap", [{ type: "year_range", first: 2011, last: 2015 }]);
    const [url, init] = fetchMock.mock.calls[0]!;
    expect(String(url)).toContain("/logs/snap/filter");
    expect(init?.method).toBe("POST");
    expect(JSON.parse(String(init?.body))).toEqual({
      pipeline: [{ type: "year_range", first: 2011, last: 2015 }],
    });
  });

  it("surfaces API error details", async () => {
    vi.spyOn(globalThis, "fetch").mockImplementation(async () =>
      jsonResponse({ detail: "unknown snapshot 'nope'" }, 404),
    );
    const client = new ApiClient("http://api.test");
    await expect(client.summary("nope")).rejects.toThrowError(ApiError);
    await expect(client.summary("nope")).rejects.toThrow(/unknown snapshot/);
  });

  it("latest-only gate drops stale responses", async () => {
    const gate = makeLatestGate();
    let releaseFirst!: (v: string) => void;
    const first = gate(new Promise<string>((resolve) => (releaseFirst = resolve)));
    const second = gate(Promise.resolve("fresh"));
    expect(await second).toBe("fresh");
    releaseFirst("stale");
    expect(await first).toBeUndefined();
  });
});
