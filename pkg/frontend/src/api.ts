// Typed client for the workbench HTTP API. The explorer performs no
// analytics of its own: every number rendered comes from these calls.

export interface SnapshotInfo {
  snapshot: string;
  name: string;
  events: number;
  cases: number;
  parent: string | null;
  pipeline: string[];
}

export interface DurationBlock {
  mean_ms: number;
  median_ms: number;
  min_ms: number;
  max_ms: number;
  mean: string;
  median: string;
  min: string;
  max: string;
}

export interface SummaryJson {
  events: number;
  cases: number;
  activities: number;
  resources: number;
  first_ts: number | null;
  last_ts: number | null;
  case_duration: DurationBlock;
}

export interface DfgNodeJson {
  absolute_freq: number;
  case_freq: number;
  max_repetitions: number;
}

export interface DfgEdgeJson {
  source: string;
  target: string;
  absolute_freq: number;
  case_freq: number;
  total_ms: number;
  mean_ms: number;
  median_ms: number;
  max_ms: number;
}

export interface DfgJson {
  metric?: string;
  nodes: Record<string, DfgNodeJson>;
  edges: DfgEdgeJson[];
  start_counts: Record<string, number>;
  end_counts: Record<string, number>;
  negative_waits: number;
}

export interface FrequencyJson {
  dimension: string;
  rows: { label: string; absolute: number; relative: number }[];
}

export interface SeriesJson {
  unit: string;
  bucket: string;
  series: { bucket: string; count: number }[];
}

export interface VariantsJson {
  variants: { sequence: string[]; case_count: number; cumulative_coverage: number }[];
}

export interface DottedJson {
  rows: string[];
  points: { row_index: number; x: number; category: string }[];
  x_mode: string;
  category: string;
}

export interface QualityJson {
  missing_resource_rate: number;
  missing_activity_part_rate: number;
  unparsed_ts_count: number;
  events_per_case: { mean: number; max: number };
  event_classes_per_case: { mean: number; max: number };
  maturity_band: number;
}

export interface SocialJson {
  kind: string;
  directed: boolean;
  nodes: { id: string; band: number; degree: number; weighted_degree: number }[];
  edges: { source: string; target: string; weight: number }[];
  skipped_pairs: number;
}

export interface ReplayHopJson {
  token_id: string;
  seq: number;
  source: string;
  target: string;
  depart_ts: number;
  arrive_ts: number;
}

export interface ReplayJson {
  token_count: number;
  hops: ReplayHopJson[];
}

export type FilterSpecJson =
  | { type: "timeframe"; mode: string; start: number; end: number }
  | { type: "attribute"; key: string; values: string[]; scope: "case" | "event" }
  | { type: "duration"; min_ms: number; max_ms: number | null }
  | { type: "year_range"; first: number; last: number };

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function expectJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(public readonly base: string) {}

  private url(path: string, params?: Record<string, string | number>): string {
    const url = new URL(`${this.base}/api/v1${path}`);
    if (params) {
      for (const [key, value] of Object.entries(params)) {
        url.searchParams.set(key, String(value));
      }
    }
    return url.toString();
  }

  async upload(file: Blob, filename: string, config?: unknown): Promise<SnapshotInfo> {
    const form = new FormData();
    form.append("file", file, filename);
    if (config !== undefined) form.append("config", JSON.stringify(config));
    return expectJson(await fetch(this.url("/logs"), { method: "POST", body: form }));
  }

  async summary(id: string): Promise<SummaryJson> {
    return expectJson(await fetch(this.url(`/logs/${id}/summary`)));
  }

  /** Slider positions are UI percentages 0..100; the API wants fractions. */
  async dfg(id: string, activitiesPct: number, pathsPct: number): Promise<DfgJson> {
    return expectJson(
      await fetch(
        this.url(`/logs/${id}/dfg`, {
          activities: activitiesPct / 100,
          paths: pathsPct / 100,
        }),
      ),
    );
  }

  async frequency(id: string, dim: string): Promise<FrequencyJson> {
    return expectJson(await fetch(this.url(`/logs/${id}/frequency`, { dim })));
  }

  async overtime(id: string, unit: string, bucket: string): Promise<SeriesJson> {
    return expectJson(await fetch(this.url(`/logs/${id}/overtime`, { unit, bucket })));
  }

  async variants(id: string): Promise<VariantsJson> {
    return expectJson(await fetch(this.url(`/logs/${id}/variants`)));
  }

  async quality(id: string): Promise<QualityJson> {
    return expectJson(await fetch(this.url(`/logs/${id}/quality`)));
  }

  async dotted(id: string, x: string, sort: string, cat: string): Promise<DottedJson> {
    return expectJson(await fetch(this.url(`/logs/${id}/dotted`, { x, sort, cat })));
  }

  async social(id: string, kind: string, metric = "joint_cases"): Promise<SocialJson> {
    return expectJson(await fetch(this.url(`/logs/${id}/social`, { kind, metric })));
  }

  async replay(id: string): Promise<ReplayJson> {
    return expectJson(await fetch(this.url(`/logs/${id}/replay`)));
  }

  async applyFilters(id: string, pipeline: FilterSpecJson[]): Promise<SnapshotInfo> {
    const response = await fetch(this.url(`/logs/${id}/filter`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ pipeline }),
    });
    return expectJson(response);
  }
}

/**
 * Guards a refetch-heavy view against out-of-order responses: only the most
 * recently issued request is allowed to deliver.
 */
export function makeLatestGate(): <T>(work: Promise<T>) => Promise<T | undefined> {
  let current = 0;
  return async <T>(work: Promise<T>): Promise<T | undefined> => {
    const ticket = ++current;
    const result = await work;
    return ticket === current ? result : undefined;
  };
}
