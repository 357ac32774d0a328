// Application shell: hash-routed single page over the workbench API.
// State lives in the URL fragment so a copied link restores the same view.

import { ApiClient, makeLatestGate, type FilterSpecJson, type ReplayJson, type SnapshotInfo } from "./api.js";
import { clear, el } from "./dom.js";
import { addSpec, describeSpec, removeSpec, TIMEFRAME_MODES, validateDraft } from "./filters.js";
import { advanceClock, clampToBounds, streamBounds, tokensAt } from "./replay.js";
import { DEFAULT_STATE, parseState, serializeState, VIEWS, type ViewState } from "./state.js";
import { computeMapGeometry, renderDotted, renderMap, renderSocial, renderSummary } from "./views.js";
import { svg } from "./dom.js";

const api = new ApiClient(
  (window as unknown as { FLOWBENCH_API?: string }).FLOWBENCH_API ?? "http://127.0.0.1:8000",
);

let state: ViewState = { ...DEFAULT_STATE };
const knownSnapshots = new Map<string, SnapshotInfo>();
const gate = makeLatestGate();
let animationHandle = 0;
let currentStream: ReplayJson | null = null;

const statusBar = el("div", { class: "status" });
const viewRoot = el("main", { class: "view" });

function setStatus(text: string, isError = false): void {
  statusBar.textContent = text;
  statusBar.className = isError ? "status error" : "status";
}

function pushState(next: Partial<ViewState>): void {
  state = { ...state, ...next };
  history.replaceState(null, "", `#${serializeState(state)}`);
  void render();
}

function navChrome(): HTMLElement {
  const nav = el("nav", { class: "nav" });
  for (const view of VIEWS) {
    const button = el("button", { class: state.view === view ? "tab active" : "tab" }, view);
    button.addEventListener("click", () => pushState({ view }));
    nav.append(button);
  }
  return nav;
}

function uploadChrome(): HTMLElement {
  const file = el("input", { type: "file" });
  const config = el("textarea", {
    rows: "3",
    placeholder: 'CSV config JSON, e.g. {"mapping": {"case_id_col": "REG_ID", ...}} — leave empty for .xes',
  });
  const button = el("button", {}, "upload");
  button.addEventListener("click", async () => {
    const chosen = file.files?.[0];
    if (!chosen) {
      setStatus("choose a .csv or .xes file first", true);
      return;
    }
    try {
      const cfg = config.value.trim() ? JSON.parse(config.value) : undefined;
      const info = await api.upload(chosen, chosen.name, cfg);
      knownSnapshots.set(info.snapshot, info);
      setStatus(`loaded ${info.name}: ${info.events} events in ${info.cases} cases`);
      pushState({ snapshot: info.snapshot, view: "summary" });
    } catch (error) {
      setStatus(`upload failed: ${(error as Error).message}`, true);
    }
  });
  return el("div", { class: "upload" }, file, config, button);
}

function breadcrumb(): HTMLElement {
  const trail = el("div", { class: "breadcrumb" });
  const chain: SnapshotInfo[] = [];
  let cursor = state.snapshot ? knownSnapshots.get(state.snapshot) : undefined;
  while (cursor) {
    chain.unshift(cursor);
    cursor = cursor.parent ? knownSnapshots.get(cursor.parent) : undefined;
  }
  if (!chain.length && state.snapshot) {
    trail.append(el("span", { class: "crumb" }, state.snapshot.slice(0, 12)));
    return trail;
  }
  chain.forEach((info, i) => {
    const label = i === 0 ? info.name : `filtered (${info.events} events)`;
    const crumb = el("button", { class: "crumb" }, label);
    crumb.addEventListener("click", () => pushState({ snapshot: info.snapshot }));
    trail.append(crumb);
    if (i < chain.length - 1) trail.append(el("span", {}, " › "));
  });
  return trail;
}

async function renderSummaryView(snapshot: string): Promise<void> {
  const data = await gate(
    Promise.all([
      api.summary(snapshot),
      api.frequency(snapshot, "activity"),
      api.overtime(snapshot, "events", "month"),
      api.variants(snapshot),
      api.quality(snapshot),
    ]),
  );
  if (!data) return;
  renderSummary(viewRoot, ...data);
}

function stopAnimation(): void {
  if (animationHandle) cancelAnimationFrame(animationHandle);
  animationHandle = 0;
}

async function renderMapView(snapshot: string): Promise<void> {
  const data = await gate(
    Promise.all([api.dfg(snapshot, state.activitiesPct, state.pathsPct), api.replay(snapshot)]),
  );
  if (!data) return;
  const [dfg, stream] = data;
  currentStream = stream;
  clear(viewRoot);

  const controls = el("div", { class: "controls" });
  const sliderRow = (label: string, value: number, onChange: (v: number) => void) => {
    const input = el("input", { type: "range", min: "0", max: "100", value: String(value) });
    const readout = el("span", { class: "readout" }, `${value}%`);
    input.addEventListener("change", () => onChange(Number(input.value)));
    input.addEventListener("input", () => (readout.textContent = `${input.value}%`));
    controls.append(el("label", { class: "slider" }, `${label} `, input, readout));
  };
  sliderRow("activities", state.activitiesPct, (v) => pushState({ activitiesPct: v }));
  sliderRow("paths", state.pathsPct, (v) => pushState({ pathsPct: v }));
  for (const metric of ["frequency", "mean_duration", "total_duration"] as const) {
    const button = el(
      "button",
      { class: state.metric === metric ? "tab active" : "tab" },
      metric.replace("_", " "),
    );
    button.addEventListener("click", () => pushState({ metric }));
    controls.append(button);
  }
  viewRoot.append(controls);

  const mapBox = el("div", { class: "map-box" });
  viewRoot.append(mapBox);
  const geometry = computeMapGeometry(dfg, state.metric);
  const root = renderMap(mapBox, geometry);

  // replay overlay
  const overlay = svg("g", { class: "tokens" });
  root.append(overlay);
  const bounds = streamBounds(stream);
  const scrub = el("input", {
    type: "range",
    min: String(bounds.start),
    max: String(bounds.end),
    value: String(Math.min(Math.max(state.clock.position, bounds.start), bounds.end)),
    class: "scrub",
  });
  const playButton = el("button", {}, state.clock.playing ? "pause" : "play");
  const clockLabel = el("span", { class: "readout" });

  const drawFrame = () => {
    while (overlay.firstChild) overlay.removeChild(overlay.firstChild);
    const frames = tokensAt(stream, state.clock.position);
    for (const frame of frames) {
      const from = geometry.positions.get(frame.source === "START" ? "__start__" : frame.source);
      const to = geometry.positions.get(frame.target === "END" ? "__end__" : frame.target);
      if (!from || !to) continue;
      const x = from.x + (to.x - from.x) * frame.fraction;
      const y = from.y + (to.y - from.y) * frame.fraction;
      overlay.append(
        svg("circle", { cx: String(x), cy: String(y), r: "6", fill: "#f58518", class: "token", "data-token": frame.tokenId }),
      );
    }
    clockLabel.textContent = new Date(state.clock.position).toISOString().slice(0, 10);
    scrub.value = String(state.clock.position);
  };

  let lastTick = performance.now();
  const loop = (now: number) => {
    const delta = now - lastTick;
    lastTick = now;
    if (state.clock.playing) {
      state = { ...state, clock: clampToBounds(advanceClock(state.clock, delta), stream) };
      drawFrame();
      if (!state.clock.playing) playButton.textContent = "play";
    }
    animationHandle = requestAnimationFrame(loop);
  };

  playButton.addEventListener("click", () => {
    const playing = !state.clock.playing;
    let position = state.clock.position;
    if (playing && (position < bounds.start || position >= bounds.end)) position = bounds.start;
    state = { ...state, clock: { ...state.clock, playing, position } };
    history.replaceState(null, "", `#${serializeState(state)}`);
    playButton.textContent = playing ? "pause" : "play";
    drawFrame();
  });
  scrub.addEventListener("input", () => {
    state = { ...state, clock: { ...state.clock, position: Number(scrub.value), playing: false } };
    history.replaceState(null, "", `#${serializeState(state)}`);
    playButton.textContent = "play";
    drawFrame();
  });

  viewRoot.append(el("div", { class: "controls" }, playButton, scrub, clockLabel));
  if (state.clock.position < bounds.start) {
    state = { ...state, clock: { ...state.clock, position: bounds.start } };
  }
  drawFrame();
  stopAnimation();
  animationHandle = requestAnimationFrame(loop);
}

async function renderDottedView(snapshot: string): Promise<void> {
  clear(viewRoot);
  const controls = el("div", { class: "controls" });
  for (const [label, value] of [
    ["absolute", "absolute"],
    ["relative to case start", "relative"],
  ] as const) {
    const button = el("button", { class: state.dottedX === value ? "tab active" : "tab" }, label);
    button.addEventListener("click", () => pushState({ dottedX: value }));
    controls.append(button);
  }
  const category = el("input", { type: "text", value: state.dottedCategory });
  category.addEventListener("change", () => pushState({ dottedCategory: category.value }));
  controls.append(el("label", {}, "color by "), category);
  viewRoot.append(controls);
  const box = el("div", {});
  viewRoot.append(box);
  try {
    const chart = await gate(api.dotted(snapshot, state.dottedX, state.dottedSort, state.dottedCategory));
    if (chart) renderDotted(box, chart);
  } catch (error) {
    setStatus((error as Error).message, true);
  }
}

async function renderSocialView(snapshot: string): Promise<void> {
  clear(viewRoot);
  const controls = el("div", { class: "controls" });
  for (const kind of ["handover", "subcontract", "working_together"] as const) {
    const button = el("button", { class: state.socialKind === kind ? "tab active" : "tab" }, kind.replace("_", " "));
    button.addEventListener("click", () => pushState({ socialKind: kind }));
    controls.append(button);
  }
  viewRoot.append(controls);
  const box = el("div", {});
  viewRoot.append(box);
  const net = await gate(api.social(snapshot, state.socialKind));
  if (net) renderSocial(box, net);
}

function renderFiltersView(snapshot: string): void {
  clear(viewRoot);
  const list = el("ul", { class: "pipeline" });
  state.draft.forEach((spec, index) => {
    const remove = el("button", { class: "mini" }, "✕");
    remove.addEventListener("click", () => pushState({ draft: removeSpec({ specs: state.draft }, index).specs }));
    list.append(el("li", {}, describeSpec(spec), " ", remove));
  });
  viewRoot.append(el("h3", {}, "filter pipeline draft"), list);

  const modeSelect = el("select", { class: "mode" });
  for (const mode of TIMEFRAME_MODES) {
    modeSelect.append(el("option", { value: mode }, mode.replace(/_/g, " ")));
  }
  const from = el("input", { type: "date", value: "2011-01-01" });
  const to = el("input", { type: "date", value: "2015-12-31" });
  const addTimeframe = el("button", {}, "add timeframe");
  addTimeframe.addEventListener("click", () => {
    const spec: FilterSpecJson = {
      type: "timeframe",
      mode: modeSelect.value,
      start: Date.parse(`${from.value}T00:00:00Z`),
      end: Date.parse(`${to.value}T23:59:59.999Z`),
    };
    pushState({ draft: addSpec({ specs: state.draft }, spec).specs });
  });
  viewRoot.append(el("div", { class: "controls" }, modeSelect, from, to, addTimeframe));

  const attrKey = el("input", { type: "text", placeholder: "resource" });
  const attrValues = el("input", { type: "text", placeholder: "staff_39, staff_01" });
  const scopeSelect = el("select", {});
  scopeSelect.append(el("option", { value: "case" }, "keep whole cases"));
  scopeSelect.append(el("option", { value: "event" }, "keep matching events"));
  const addAttribute = el("button", {}, "add attribute");
  addAttribute.addEventListener("click", () => {
    const spec: FilterSpecJson = {
      type: "attribute",
      key: attrKey.value.trim(),
      values: attrValues.value.split(",").map((v) => v.trim()).filter(Boolean),
      scope: scopeSelect.value as "case" | "event",
    };
    pushState({ draft: addSpec({ specs: state.draft }, spec).specs });
  });
  viewRoot.append(el("div", { class: "controls" }, attrKey, attrValues, scopeSelect, addAttribute));

  const firstYear = el("input", { type: "number", value: "2011", class: "year" });
  const lastYear = el("input", { type: "number", value: "2015", class: "year" });
  const addYears = el("button", {}, "add year range");
  addYears.addEventListener("click", () => {
    const spec: FilterSpecJson = {
      type: "year_range",
      first: Number(firstYear.value),
      last: Number(lastYear.value),
    };
    pushState({ draft: addSpec({ specs: state.draft }, spec).specs });
  });
  viewRoot.append(el("div", { class: "controls" }, firstYear, lastYear, addYears));

  const apply = el("button", { class: "apply" }, "apply pipeline");
  apply.addEventListener("click", async () => {
    const problem = validateDraft({ specs: state.draft });
    if (problem) {
      setStatus(problem, true);
      return;
    }
    try {
      const info = await api.applyFilters(snapshot, state.draft);
      knownSnapshots.set(info.snapshot, info);
      setStatus(
        info.snapshot === snapshot
          ? "pipeline changed nothing (same snapshot)"
          : `new snapshot: ${info.events} events in ${info.cases} cases`,
      );
      pushState({ snapshot: info.snapshot, draft: [], view: "summary" });
    } catch (error) {
      setStatus(`filter failed: ${(error as Error).message}`, true);
    }
  });
  viewRoot.append(apply);
}

async function render(): Promise<void> {
  stopAnimation();
  const app = document.getElementById("app");
  if (!app) return;
  clear(app);
  app.append(el("header", {}, el("h1", {}, "flowbench explorer"), uploadChrome(), statusBar));
  app.append(breadcrumb());
  app.append(navChrome());
  app.append(viewRoot);
  if (!state.snapshot) {
    clear(viewRoot);
    viewRoot.append(el("p", { class: "note" }, "Upload a CSV or XES event log to explore it."));
    return;
  }
  try {
    if (state.view === "summary") await renderSummaryView(state.snapshot);
    else if (state.view === "map") await renderMapView(state.snapshot);
    else if (state.view === "dotted") await renderDottedView(state.snapshot);
    else if (state.view === "social") await renderSocialView(state.snapshot);
    else renderFiltersView(state.snapshot);
  } catch (error) {
    setStatus((error as Error).message, true);
  }
}

window.addEventListener("hashchange", () => {
  state = parseState(location.hash);
  void render();
});

state = parseState(location.hash);
void render();
