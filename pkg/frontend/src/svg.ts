/** Dependency-free SVG rendering for risk curves and heat grids.
 * Charts are plain strings, so rendering is testable without a DOM;
 * hover values live in SVG <title> elements. */

import type { HeatmapGrid } from './heatmap.js';
import { formatShort } from './format.js';
import type { Series } from './series.js';

const W = 640;
const H = 320;
const PAD = { left: 56, right: 16, top: 16, bottom: 36 };

function esc(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
}

interface Scale {
  (v: number): number;
}

function linearScale(domainMin: number, domainMax: number, rangeMin: number, rangeMax: number): Scale {
  const span = domainMax - domainMin || 1;
  return (v) => rangeMin + ((v - domainMin) / span) * (rangeMax - rangeMin);
}

/** Mean lines with +-1 std bands, one color per scenario, with legend. */
export function renderLineChart(seriesList: Series[], title: string): string {
  if (seriesList.length === 0) {
    return `<svg viewBox="0 0 ${W} ${H}" role="img"><text x="${W / 2}" y="${
      H / 2
    }" text-anchor="middle" class="empty">no scenarios to plot</text></svg>`;
  }
  const xs = seriesList.flatMap((s) => s.points.map((p) => p.n));
  const lows = seriesList.flatMap((s) => s.points.map((p) => p.mean - p.std));
  const highs = seriesList.flatMap((s) => s.points.map((p) => p.mean + p.std));
  const x = linearScale(Math.min(...xs), Math.max(...xs), PAD.left, W - PAD.right);
  const yMin = Math.min(0, ...lows);
  const yMax = Math.max(...highs) || 1;
  const y = linearScale(yMin, yMax, H - PAD.bottom, PAD.top);

  const parts: string[] = [
    `<svg viewBox="0 0 ${W} ${H}" role="img" aria-label="${esc(title)}">`,
    `<text x="${PAD.left}" y="12" class="chart-title">${esc(title)}</text>`,
  ];
  // axes
  parts.push(
    `<line x1="${PAD.left}" y1="${H - PAD.bottom}" x2="${W - PAD.right}" y2="${
      H - PAD.bottom
    }" class="axis"/>`,
    `<line x1="${PAD.left}" y1="${PAD.top}" x2="${PAD.left}" y2="${H - PAD.bottom}" class="axis"/>`,
  );
  for (const tick of [yMin, (yMin + yMax) / 2, yMax]) {
    parts.push(
      `<text x="${PAD.left - 6}" y="${y(tick) + 4}" text-anchor="end" class="tick">${formatShort(
        tick,
      )}</text>`,
    );
  }
  const xTicks = [...new Set(xs)].sort((a, b) => a - b);
  for (const tick of [xTicks[0], xTicks[Math.floor(xTicks.length / 2)], xTicks[xTicks.length - 1]]) {
    parts.push(
      `<text x="${x(tick)}" y="${H - PAD.bottom + 16}" text-anchor="middle" class="tick">${tick}</text>`,
    );
  }

  for (const series of seriesList) {
    const pts = series.points;
    if (pts.length === 0) continue;
    const band = [
      ...pts.map((p) => `${x(p.n)},${y(p.mean + p.std)}`),
      ...[...pts].reverse().map((p) => `${x(p.n)},${y(Math.max(yMin, p.mean - p.std))}`),
    ].join(' ');
    parts.push(
      `<polygon points="${band}" fill="${series.color}" opacity="0.12" stroke="none"/>`,
    );
    const line = pts.map((p) => `${x(p.n)},${y(p.mean)}`).join(' ');
    parts.push(
      `<polyline points="${line}" fill="none" stroke="${series.color}" stroke-width="2"/>`,
    );
    for (const p of pts) {
      parts.push(
        `<circle cx="${x(p.n)}" cy="${y(p.mean)}" r="3.5" fill="${series.color}" data-series="${
          series.scenarioId
        }" data-n="${p.n}"><title>${esc(p.tooltip)}</title></circle>`,
      );
    }
  }
  // legend
  seriesList.forEach((series, i) => {
    const ly = PAD.top + 14 * i;
    parts.push(
      `<rect x="${W - PAD.right - 150}" y="${ly}" width="10" height="10" fill="${series.color}"/>`,
      `<text x="${W - PAD.right - 135}" y="${ly + 9}" class="legend">${esc(series.label)}</text>`,
    );
  });
  parts.push('</svg>');
  return parts.join('');
}

/** Color cells by value; hover titles carry the exact payload numbers. */
export function renderHeatmap(grid: HeatmapGrid, title: string): string {
  const rows = grid.reserveFractions.length;
  const cols = grid.portfolioSizes.length;
  const flat = grid.values.flat();
  const vMin = Math.min(...flat);
  const vMax = Math.max(...flat);
  const cellW = (W - PAD.left - PAD.right) / cols;
  const cellH = (H - PAD.top - PAD.bottom) / rows;
  const parts = [
    `<svg viewBox="0 0 ${W} ${H}" role="img" aria-label="${esc(title)}">`,
    `<text x="${PAD.left}" y="12" class="chart-title">${esc(title)}</text>`,
  ];
  for (let i = 0; i < rows; i++) {
    for (let j = 0; j < cols; j++) {
      const v = grid.values[i][j];
      const t = vMax > vMin ? (v - vMin) / (vMax - vMin) : 0.5;
      const hue = 220 - 180 * t;
      const cx = PAD.left + j * cellW;
      const cy = PAD.top + i * cellH;
      parts.push(
        `<rect x="${cx}" y="${cy}" width="${cellW}" height="${cellH}" fill="hsl(${hue},70%,55%)" data-r="${grid.reserveFractions[i]}" data-n="${grid.portfolioSizes[j]}"><title>${esc(
          grid.tooltips[i][j],
        )}</title></rect>`,
      );
    }
  }
  grid.portfolioSizes.forEach((n, j) => {
    if (j % Math.ceil(cols / 8) === 0 || j === cols - 1) {
      parts.push(
        `<text x="${PAD.left + (j + 0.5) * cellW}" y="${H - PAD.bottom + 16}" text-anchor="middle" class="tick">${n}</text>`,
      );
    }
  });
  grid.reserveFractions.forEach((r, i) => {
    parts.push(
      `<text x="${PAD.left - 6}" y="${PAD.top + (i + 0.5) * cellH + 4}" text-anchor="end" class="tick">${r}</text>`,
    );
  });
  parts.push('</svg>');
  return parts.join('');
}
