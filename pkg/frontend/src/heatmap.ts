/** Pivot a sweep payload into a (reserve fraction x portfolio size) grid. */

import { formatExact } from './format.js';
import type { MetricName, SimResponse } from './types.js';

export interface HeatmapGrid {
  metric: MetricName;
  bound: number | null;
  reserveFractions: number[];
  portfolioSizes: number[];
  /** values[i][j] is the replicate mean at (reserveFractions[i], portfolioSizes[j]) */
  values: number[][];
  /** exact-value tooltip per cell, same indexing */
  tooltips: string[][];
}

export class HeatmapAxesError extends Error {}

export function heatmapGrid(
  response: SimResponse,
  metric: MetricName,
  bound?: number | null,
): HeatmapGrid {
  const plan = response.result.plan;
  const bounds = [...new Set(plan.bounds)];
  const pinned = bound !== undefined ? bound : bounds.length === 1 ? bounds[0] : undefined;
  if (pinned === undefined) {
    throw new HeatmapAxesError(
      'several return caps in this sweep; pick one to render a heat grid',
    );
  }
  const rs = plan.reserve_fractions;
  const ns = plan.portfolio_sizes;
  if (rs.length < 2) {
    throw new HeatmapAxesError(
      'this scenario sweeps a single reserve fraction; add a reserve grid to compare follow-on strategies',
    );
  }
  const values = rs.map(() => ns.map(() => NaN));
  const tooltips = rs.map(() => ns.map(() => ''));
  for (const row of response.result.rows) {
    if (row.bound !== pinned) continue;
    const i = rs.indexOf(row.reserve_fraction);
    const j = ns.indexOf(row.portfolio_size);
    if (i < 0 || j < 0) continue;
    if (row.error !== undefined) {
      throw new HeatmapAxesError(
        `grid cell N=${row.portfolio_size}, r=${row.reserve_fraction} failed: ${row.error}`,
      );
    }
    const value = row.metrics![metric].mean;
    values[i][j] = value;
    tooltips[i][j] = `r=${rs[i]}, N=${ns[j]}: ${metric} = ${formatExact(value)}`;
  }
  if (values.some((rowVals) => rowVals.some((v) => Number.isNaN(v)))) {
    throw new HeatmapAxesError('sweep does not cover the full (r, N) grid');
  }
  return {
    metric,
    bound: pinned,
    reserveFractions: [...rs],
    portfolioSizes: [...ns],
    values,
    tooltips,
  };
}
