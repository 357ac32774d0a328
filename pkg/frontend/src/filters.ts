// Filter-panel model: the pipeline draft the user composes before POSTing
// it to the API. The five timeframe modes are fixed by the backend contract.

import type { FilterSpecJson } from "./api.js";

export const TIMEFRAME_MODES = [
  "contained_in",
  "intersecting",
  "started_in",
  "completed_in",
  "trim",
] as const;

export type TimeframeMode = (typeof TIMEFRAME_MODES)[number];

export interface PipelineDraft {
  specs: FilterSpecJson[];
}

export const EMPTY_DRAFT: PipelineDraft = { specs: [] };

export function addSpec(draft: PipelineDraft, spec: FilterSpecJson): PipelineDraft {
  return { specs: [...draft.specs, spec] };
}

export function removeSpec(draft: PipelineDraft, index: number): PipelineDraft {
  return { specs: draft.specs.filter((_, i) => i !== index) };
}

/** Human-readable breadcrumb text for a spec. */
export function describeSpec(spec: FilterSpecJson): string {
  switch (spec.type) {
    case "timeframe": {
      const from = new Date(spec.start).toISOString().slice(0, 10);
      const to = new Date(spec.end).toISOString().slice(0, 10);
      return `${spec.mode.replace(/_/g, " ")} ${from} .. ${to}`;
    }
    case "attribute":
      return `${spec.key} in {${spec.values.join(", ")}} (${spec.scope})`;
    case "duration": {
      const upper = spec.max_ms === null ? "∞" : `${spec.max_ms} ms`;
      return `duration ${spec.min_ms} ms .. ${upper}`;
    }
    case "year_range":
      return `years ${spec.first}–${spec.last}`;
  }
}

/** Returns a problem description, or null when the spec can be POSTed. */
export function validateSpec(spec: FilterSpecJson): string | null {
  switch (spec.type) {
    case "timeframe":
      if (!(TIMEFRAME_MODES as readonly string[]).includes(spec.mode)) {
        return `unknown mode ${spec.mode}`;
      }
      if (spec.start > spec.end) return "range start is after its end";
      return null;
    case "attribute":
      if (!spec.key) return "attribute key is empty";
      if (!spec.values.length) return "no values selected";
      return null;
    case "duration":
      if (spec.max_ms !== null && spec.min_ms > spec.max_ms) return "min exceeds max";
      return null;
    case "year_range":
      if (spec.first > spec.last) return "first year is after last";
      return null;
  }
}

export function validateDraft(draft: PipelineDraft): string | null {
  for (const spec of draft.specs) {
    const problem = validateSpec(spec);
    if (problem) return problem;
  }
  return null;
}
