import type { EvaluationReport } from "./types.js";

export const SUPPORTED_HATTE_VERSION = "1.0";

// One fixed color per difficulty; every mark in the distribution chart
// uses exactly one of these.
export const DIFFICULTY_COLORS: Record<string, string> = {
  easy: "#2e7d32",
  medium: "#f9a825",
  hard: "#c62828",
};
const UNKNOWN_COLOR = "#757575";

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

// Extract the literal token of a scalar field from the report's JSON bytes.
// KPI numbers must render exactly as the server wrote them (1.0 stays
// "1.0"), which JSON.parse + String would destroy.
export function rawField(rawJson: string, field: string): string {
  const pattern = new RegExp(
    `"${field}"\\s*:\\s*(-?\\d+(?:\\.\\d+)?(?:[eE][+-]?\\d+)?|null|true|false)`,
  );
  const match = rawJson.match(pattern);
  if (match === null || match[1] === undefined) {
    throw new Error(`field ${field} not found in report JSON`);
  }
  return match[1];
}

function kpi(label: string, value: string): string {
  return (
    `<div class="kpi"><span class="kpi-label">${esc(label)}</span>` +
    `<span class="kpi-value">${esc(value)}</span></div>`
  );
}

// The KPI strip above the charts. Values come straight from the JSON
// bytes so they compare byte-equal to the report file.
export function kpiHeader(rawJson: string): string {
  const single = rawField(rawJson, "single_entity_calls");
  const bulk = rawField(rawJson, "bulk_calls");
  const split = `${single} single / ${bulk} bulk`;
  return (
    `<header class="kpi-header">` +
    kpi("overall mean", rawField(rawJson, "overall_mean")) +
    kpi("tool usage", split) +
    kpi("single fraction", rawField(rawJson, "single_fraction")) +
    kpi("hallucination rate", rawField(rawJson, "hallucination_rate")) +
    `</header>`
  );
}

export function difficultyColor(difficulty: string): string {
  return DIFFICULTY_COLORS[difficulty] ?? UNKNOWN_COLOR;
}

// Score distribution: one mark per scenario, x by scenario order, y by
// score, colored by difficulty. Legend carries the per-difficulty means.
export function scoreDistribution(report: EvaluationReport): string {
  const ids = Object.keys(report.per_scenario).sort();
  const width = 640;
  const height = 220;
  const pad = { left: 42, right: 12, top: 12, bottom: 28 };
  const plotW = width - pad.left - pad.right;
  const plotH = height - pad.top - pad.bottom;
  const x = (i: number): number =>
    ids.length === 1
      ? pad.left + plotW / 2
      : pad.left + (i / (ids.length - 1)) * plotW;
  const y = (score: number): number => pad.top + (1 - score) * plotH;

  const marks = ids.map((id, i) => {
    const sc = report.per_scenario[id]!;
    return (
      `<circle class="mark" data-scenario="${esc(id)}" ` +
      `data-difficulty="${esc(sc.difficulty)}" cx="${x(i).toFixed(1)}" ` +
      `cy="${y(sc.score).toFixed(1)}" r="4" ` +
      `fill="${difficultyColor(sc.difficulty)}"><title>` +
      `${esc(id)} (${esc(sc.category)}): ${sc.score.toFixed(4)}` +
      `</title></circle>`
    );
  });

  const legend = Object.entries(report.by_difficulty).map(
    ([difficulty, mean], i) =>
      `<g class="legend-entry" transform="translate(${pad.left + i * 190},${height - 8})">` +
      `<circle r="4" fill="${difficultyColor(difficulty)}"></circle>` +
      `<text x="8" y="4">${esc(difficulty)} mean ${mean.toFixed(4)}</text></g>`,
  );

  const axis =
    `<line x1="${pad.left}" y1="${y(0)}" x2="${width - pad.right}" y2="${y(0)}" stroke="#999"></line>` +
    `<line x1="${pad.left}" y1="${y(0)}" x2="${pad.left}" y2="${y(1)}" stroke="#999"></line>` +
    `<text x="${pad.left - 6}" y="${y(1) + 4}" text-anchor="end">1.0</text>` +
    `<text x="${pad.left - 6}" y="${y(0) + 4}" text-anchor="end">0.0</text>`;

  return (
    `<svg class="score-distribution" viewBox="0 0 ${width} ${height}" ` +
    `role="img" aria-label="per-scenario scores">` +
    axis +
    marks.join("") +
    legend.join("") +
    `</svg>`
  );
}

// Per-category means as horizontal bars, best first.
export function categoryBars(report: EvaluationReport): string {
  const entries = Object.entries(report.by_category).sort(
    (a, b) => b[1] - a[1] || a[0].localeCompare(b[0]),
  );
  const rowH = 18;
  const labelW = 230;
  const barW = 360;
  const width = labelW + barW + 60;
  const height = entries.length * rowH + 8;

  const rows = entries.map(([category, mean], i) => {
    const yTop = 4 + i * rowH;
    const w = Math.max(0, Math.min(1, mean)) * barW;
    return (
      `<g class="category-bar" data-category="${esc(category)}">` +
      `<text x="${labelW - 6}" y="${yTop + 12}" text-anchor="end">${esc(category)}</text>` +
      `<rect x="${labelW}" y="${yTop + 2}" width="${w.toFixed(1)}" height="${rowH - 6}" fill="#456990"></rect>` +
      `<text x="${labelW + w + 6}" y="${yTop + 12}">${mean.toFixed(4)}</text></g>`
    );
  });

  return (
    `<svg class="category-bars" viewBox="0 0 ${width} ${height}" role="img" ` +
    `aria-label="per-category means">` +
    rows.join("") +
    `</svg>`
  );
}

// Full evaluation view over the raw report bytes. An unexpected schema
// version renders an explicit error instead of wrong charts.
export function renderEvalView(rawJson: string): string {
  let report: EvaluationReport;
  try {
    report = JSON.parse(rawJson) as EvaluationReport;
  } catch {
    return `<div class="schema-error">report is not valid JSON</div>`;
  }
  if (report.hatte_version !== SUPPORTED_HATTE_VERSION) {
    return (
      `<div class="schema-error">unsupported report schema ` +
      `${esc(String(report.hatte_version))}; this dashboard renders ` +
      `${SUPPORTED_HATTE_VERSION}</div>`
    );
  }
  return (
    `<section class="eval-view">` +
    kpiHeader(rawJson) +
    scoreDistribution(report) +
    categoryBars(report) +
    `</section>`
  );
}
