// Presentation-only formatting of values the API returns in raw form.

const SECOND = 1000;
const MINUTE = 60 * SECOND;
const HOUR = 60 * MINUTE;
const DAY = 24 * HOUR;
const WEEK = 7 * DAY;
const MONTH = 30.44 * DAY;
const YEAR = 365.25 * DAY;

const BANDS: [number, number, string][] = [
  [SECOND, 60, "seconds"],
  [MINUTE, 60, "minutes"],
  [HOUR, 24, "hours"],
  [DAY, 30, "days"],
  [WEEK, 26, "weeks"],
  [MONTH, 48, "months"],
  [YEAR, 1000, "years"],
];

function trim1(value: number): string {
  const rounded = Math.round(value * 10) / 10;
  return Number.isInteger(rounded) ? String(rounded) : rounded.toFixed(1);
}

export function formatDuration(ms: number): string {
  const value = Math.max(0, ms);
  if (value < SECOND) return `${Math.floor(value)} ms`;
  for (const [unit, limit, name] of BANDS) {
    if (value / unit < limit) return `${trim1(value / unit)} ${name}`;
  }
  return `${trim1(value / YEAR / 1000)} thousand years`;
}

export function formatTimestamp(ms: number | null): string {
  if (ms === null) return "–";
  return new Date(ms).toISOString().replace("T", " ").slice(0, 16);
}

export function formatPercent(fraction: number): string {
  return `${(fraction * 100).toFixed(2)}%`;
}
