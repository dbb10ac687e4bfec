/**
 * Inline SVG chart of accuracy against the number of labeled points.
 *
 * Pure string rendering, no DOM and no chart library. Each marker
 * carries the exact accuracy value in a data attribute (shortest
 * round-trip JSON form) so the rendered series can be compared with
 * exported report values digit for digit.
 */

import type { HistoryEntry } from "./types.js";

export interface SeriesPoint {
  labels: number;
  accuracy: number;
}

export interface ChartOptions {
  width?: number;
  height?: number;
}

/** History entries with a measured accuracy, as (labels, accuracy) pairs. */
export function accuracySeries(history: HistoryEntry[]): SeriesPoint[] {
  const series: SeriesPoint[] = [];
  for (const entry of history) {
    if (entry.accuracy !== null) {
      series.push({ labels: entry.n_labeled, accuracy: entry.accuracy });
    }
  }
  return series;
}

function niceStep(span: number, count: number): number {
  const raw = span / Math.max(count, 1);
  const magnitude = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const mult of [1, 2, 5, 10]) {
    if (magnitude * mult >= raw) return magnitude * mult;
  }
  return magnitude * 10;
}

function ticks(lo: number, hi: number, count: number): number[] {
  if (hi <= lo) return [lo];
  const step = niceStep(hi - lo, count);
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    out.push(Number(v.toFixed(10)));
  }
  return out;
}

export function renderAccuracyChart(
  series: SeriesPoint[],
  options: ChartOptions = {},
): string {
  const width = options.width ?? 420;
  const height = options.height ?? 260;
  const margin = { top: 12, right: 14, bottom: 34, left: 48 };
  const innerW = width - margin.left - margin.right;
  const innerH = height - margin.top - margin.bottom;
  const open =
    `<svg class="chart" viewBox="0 0 ${width} ${height}" role="img" ` +
    `aria-label="accuracy versus labeled points">`;
  if (series.length === 0) {
    return (
      `${open}<text class="chart-empty" x="${width / 2}" y="${height / 2}" ` +
      `text-anchor="middle">no accuracy recorded yet</text></svg>`
    );
  }

  const xs = series.map((p) => p.labels);
  const ys = series.map((p) => p.accuracy);
  let xLo = Math.min(...xs);
  let xHi = Math.max(...xs);
  if (xHi === xLo) {
    xLo -= 1;
    xHi += 1;
  }
  let yLo = Math.min(...ys);
  let yHi = Math.max(...ys);
  const pad = Math.max((yHi - yLo) * 0.1, 0.02);
  yLo = Math.max(0, yLo - pad);
  yHi = Math.min(1, yHi + pad);

  const px = (v: number) => margin.left + ((v - xLo) / (xHi - xLo)) * innerW;
  const py = (v: number) =>
    margin.top + (1 - (v - yLo) / (yHi - yLo)) * innerH;
  const fmt = (v: number) => v.toFixed(2);

  const parts: string[] = [open];
  const x0 = margin.left;
  const x1 = width - margin.right;
  const y0 = margin.top;
  const y1 = height - margin.bottom;
  parts.push(`<line class="axis" x1="${x0}" y1="${y1}" x2="${x1}" y2="${y1}"/>`);
  parts.push(`<line class="axis" x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}"/>`);

  for (const t of ticks(xLo, xHi, 5)) {
    const x = fmt(px(t));
    parts.push(`<line class="tick" x1="${x}" y1="${y1}" x2="${x}" y2="${y1 + 4}"/>`);
    parts.push(
      `<text class="tick-label" x="${x}" y="${y1 + 16}" ` +
      `text-anchor="middle">${t}</text>`,
    );
  }
  for (const t of ticks(yLo, yHi, 4)) {
    const y = fmt(py(t));
    parts.push(`<line class="tick" x1="${x0 - 4}" y1="${y}" x2="${x0}" y2="${y}"/>`);
    parts.push(
      `<text class="tick-label" x="${x0 - 7}" y="${y}" text-anchor="end" ` +
      `dominant-baseline="middle">${t.toFixed(2)}</text>`,
    );
  }
  parts.push(
    `<text class="axis-label" x="${(x0 + x1) / 2}" y="${height - 4}" ` +
    `text-anchor="middle">labeled points</text>`,
  );

  if (series.length > 1) {
    const points = series
      .map((p) => `${fmt(px(p.labels))},${fmt(py(p.accuracy))}`)
      .join(" ");
    parts.push(`<polyline class="curve" points="${points}"/>`);
  }
  for (const p of series) {
    const exact = JSON.stringify(p.accuracy);
    parts.push(
      `<circle class="marker" cx="${fmt(px(p.labels))}" ` +
      `cy="${fmt(py(p.accuracy))}" r="3.2" data-labels="${p.labels}" ` +
      `data-acc="${exact}"><title>${p.labels} labels: ${exact}</title></circle>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}
