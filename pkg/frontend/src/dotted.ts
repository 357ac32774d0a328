// Dotted-chart view model: scales API points into a drawable box and assigns
// a stable color per category.

import type { DottedJson } from "./api.js";

const PALETTE = [
  "#4c78a8",
  "#f58518",
  "#54a24b",
  "#e45756",
  "#72b7b2",
  "#eeca3b",
  "#b279a2",
  "#ff9da6",
  "#9d755d",
  "#bab0ac",
];

export interface DottedPoint {
  x: number; // 0..1 within the plot area
  y: number; // 0..1, row position
  color: string;
  category: string;
}

export interface DottedViewModel {
  points: DottedPoint[];
  rowCount: number;
  categories: Map<string, string>; // category -> color, insertion-sorted
  xMin: number;
  xMax: number;
}

export function dottedViewModel(chart: DottedJson): DottedViewModel {
  const categories = new Map<string, string>();
  for (const category of [...new Set(chart.points.map((p) => p.category))].sort()) {
    categories.set(category, PALETTE[categories.size % PALETTE.length]!);
  }
  let xMin = Number.POSITIVE_INFINITY;
  let xMax = Number.NEGATIVE_INFINITY;
  for (const point of chart.points) {
    xMin = Math.min(xMin, point.x);
    xMax = Math.max(xMax, point.x);
  }
  if (!chart.points.length) {
    xMin = 0;
    xMax = 1;
  }
  const span = xMax > xMin ? xMax - xMin : 1;
  const rows = Math.max(1, chart.rows.length);
  const points = chart.points.map((point) => ({
    x: (point.x - xMin) / span,
    y: rows === 1 ? 0.5 : point.row_index / (rows - 1),
    color: categories.get(point.category) ?? PALETTE[0]!,
    category: point.category,
  }));
  return { points, rowCount: chart.rows.length, categories, xMin, xMax };
}
