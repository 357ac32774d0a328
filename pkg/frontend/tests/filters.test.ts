import { describe, expect, it } from "vitest";

import {
  addSpec,
  describeSpec,
  EMPTY_DRAFT,
  removeSpec,
  TIMEFRAME_MODES,
  validateDraft,
  validateSpec,
} from "../src/filters.js";

describe("filter panel model", () => {
  it("offers exactly the five timeframe modes", () => {
    expect([...TIMEFRAME_MODES]).toEqual([
      "contained_in",
      "intersecting",
      "started_in",
      "completed_in",
      "trim",
    ]);
  });

  it("adds and removes specs immutably", () => {
    const a = addSpec(EMPTY_DRAFT, { type: "year_range", first: 2011, last: 2015 });
    const b = addSpec(a, { type: "duration", min_ms: 0, max_ms: 1000 });
    expect(EMPTY_DRAFT.specs).toHaveLength(0);
    expect(b.specs).toHaveLength(2);
    expect(removeSpec(b, 0).specs).toEqual([{ type: "duration", min_ms: 0, max_ms: 1000 }]);
  });

  it("describes specs for the breadcrumb", () => {
    expect(describeSpec({ type: "year_range", first: 2011, last: 2015 })).toBe("years 2011–2015");
    expect(
      describeSpec({ type: "attribute", key: "resource", values: ["staff_39"], scope: "event" }),
    ).toBe("resource in {staff_39} (event)");
    expect(describeSpec({ type: "duration", min_ms: 5, max_ms: null })).toContain("∞");
  });

  it("validates broken specs", () => {
    expect(validateSpec({ type: "timeframe", mode: "trim", start: 0, end: 10 })).toBeNull();
    expect(validateSpec({ type: "timeframe", mode: "sideways", start: 0, end: 10 })).toMatch(/mode/);
    expect(validateSpec({ type: "timeframe", mode: "trim", start: 10, end: 0 })).toMatch(/after/);
    expect(validateSpec({ type: "attribute", key: "", values: ["x"], scope: "case" })).toMatch(/key/);
    expect(validateSpec({ type: "duration", min_ms: 9, max_ms: 1 })).toMatch(/min/);
    expect(validateSpec({ type: "year_range", first: 2016, last: 2011 })).toMatch(/year/);
  });

  it("validates the whole draft", () => {
    const draft = addSpec(
      addSpec(EMPTY_DRAFT, { type: "year_range", first: 2011, last: 2015 }),
      { type: "year_range", first: 9, last: 1 },
    );
    expect(validateDraft(draft)).toMatch(/year/);
    expect(validateDraft(EMPTY_DRAFT)).toBeNull();
  });
});
