// View state and its URL-fragment serialization. A restored fragment must
// reproduce the identical view for the same snapshot, so everything the
// render depends on lives here.

import type { FilterSpecJson } from "./api.js";

export type ViewName = "summary" | "map" | "dotted" | "social" | "filters";

export const VIEWS: readonly ViewName[] = ["summary", "map", "dotted", "social", "filters"];

export type MapMetric = "frequency" | "mean_duration" | "total_duration";

export interface ClockState {
  playing: boolean;
  position: number; // virtual log time, epoch ms
  speed: number; // log-ms advanced per wall-ms
}

export interface ViewState {
  snapshot: string | null;
  view: ViewName;
  activitiesPct: number; // 0..100
  pathsPct: number; // 0..100
  metric: MapMetric;
  socialKind: "handover" | "subcontract" | "working_together";
  dottedX: "absolute" | "relative";
  dottedSort: "first_event_time" | "duration";
  dottedCategory: string;
  clock: ClockState;
  draft: FilterSpecJson[];
}

export const DEFAULT_STATE: ViewState = {
  snapshot: null,
  view: "summary",
  activitiesPct: 100,
  pathsPct: 100,
  metric: "frequency",
  socialKind: "handover",
  dottedX: "absolute",
  dottedSort: "first_event_time",
  dottedCategory: "activity",
  clock: { playing: false, position: 0, speed: 86_400_000 / 1000 }, // one day per second
  draft: [],
};

function clampPct(value: number): number {
  if (!Number.isFinite(value)) return 100;
  return Math.min(100, Math.max(0, value));
}

export function serializeState(state: ViewState): string {
  const params = new URLSearchParams();
  if (state.snapshot) params.set("s", state.snapshot);
  params.set("v", state.view);
  params.set("a", String(state.activitiesPct));
  params.set("p", String(state.pathsPct));
  params.set("m", state.metric);
  params.set("k", state.socialKind);
  params.set("dx", state.dottedX);
  params.set("ds", state.dottedSort);
  params.set("dc", state.dottedCategory);
  params.set("cp", String(state.clock.position));
  params.set("cs", String(state.clock.speed));
  if (state.clock.playing) params.set("play", "1");
  if (state.draft.length) params.set("f", JSON.stringify(state.draft));
  return params.toString();
}

export function parseState(fragment: string): ViewState {
  const params = new URLSearchParams(fragment.replace(/^#/, ""));
  const state: ViewState = {
    ...DEFAULT_STATE,
    clock: { ...DEFAULT_STATE.clock },
    draft: [],
  };
  const snapshot = params.get("s");
  if (snapshot) state.snapshot = snapshot;
  const view = params.get("v") as ViewName | null;
  if (view && VIEWS.includes(view)) state.view = view;
  if (params.has("a")) state.activitiesPct = clampPct(Number(params.get("a")));
  if (params.has("p")) state.pathsPct = clampPct(Number(params.get("p")));
  const metric = params.get("m");
  if (metric === "frequency" || metric === "mean_duration" || metric === "total_duration") {
    state.metric = metric;
  }
  const kind = params.get("k");
  if (kind === "handover" || kind === "subcontract" || kind === "working_together") {
    state.socialKind = kind;
  }
  const dx = params.get("dx");
  if (dx === "absolute" || dx === "relative") state.dottedX = dx;
  const ds = params.get("ds");
  if (ds === "first_event_time" || ds === "duration") state.dottedSort = ds;
  const dc = params.get("dc");
  if (dc) state.dottedCategory = dc;
  if (params.has("cp")) {
    const position = Number(params.get("cp"));
    if (Number.isFinite(position)) state.clock.position = position;
  }
  if (params.has("cs")) {
    const speed = Number(params.get("cs"));
    if (Number.isFinite(speed) && speed > 0) state.clock.speed = speed;
  }
  state.clock.playing = params.get("play") === "1";
  const draft = params.get("f");
  if (draft) {
    try {
      const parsed = JSON.parse(draft) as FilterSpecJson[];
      if (Array.isArray(parsed)) state.draft = parsed;
    } catch {
      // a broken fragment falls back to an empty draft
    }
  }
  return state;
}
