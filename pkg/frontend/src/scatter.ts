/**
 * Thumbnail scatter for one batch card: the whole query set plotted in
 * its first two feature coordinates with this card's point emphasized.
 * Datasets here have no images, so the neighborhood picture is what a
 * labeler gets to judge a point by.
 */

interface PlotPoint {
  x: number;
  y: number;
  focus: boolean;
}

export function renderBatchScatter(
  preview: number[][],
  highlight: number,
  size = 96,
): string {
  const open = `<svg class="scatter" viewBox="0 0 ${size} ${size}" aria-hidden="true">`;
  const frame = `<rect class="scatter-frame" x="0.5" y="0.5" width="${size - 1}" height="${size - 1}"/>`;
  if (
    highlight < 0 ||
    highlight >= preview.length ||
    preview[highlight].length === 0
  ) {
    return `${open}${frame}</svg>`;
  }

  const points: PlotPoint[] = [];
  for (let i = 0; i < preview.length; i++) {
    const row = preview[i];
    if (row.length === 0) continue;
    points.push({
      x: row[0],
      y: row.length > 1 ? row[1] : 0,
      focus: i === highlight,
    });
  }

  const xs = points.map((p) => p.x);
  const ys = points.map((p) => p.y);
  const xLo = Math.min(...xs);
  const xSpan = Math.max(...xs) - xLo;
  const yLo = Math.min(...ys);
  const ySpan = Math.max(...ys) - yLo;
  const pad = 9;
  const inner = size - 2 * pad;
  const px = (v: number) =>
    xSpan > 0 ? pad + ((v - xLo) / xSpan) * inner : size / 2;
  // SVG y grows downward; flip so the plot reads like the plane
  const py = (v: number) =>
    ySpan > 0 ? pad + (1 - (v - yLo) / ySpan) * inner : size / 2;
  const fmt = (v: number) => v.toFixed(1);

  const parts = [open, frame];
  for (const p of points) {
    if (p.focus) continue;
    parts.push(
      `<circle class="pt" cx="${fmt(px(p.x))}" cy="${fmt(py(p.y))}" r="2.2"/>`,
    );
  }
  for (const p of points) {
    if (!p.focus) continue;
    parts.push(
      `<circle class="pt focus" cx="${fmt(px(p.x))}" cy="${fmt(py(p.y))}" r="4"/>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}
