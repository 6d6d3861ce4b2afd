/** Turn sweep payloads into chart-ready series. Values pass through
 * untouched: every number plotted or shown in a tooltip is a payload
 * value, never a client-side recomputation. */

import { formatExact } from './format.js';
import type { Scenario } from './scenarios.js';
import type {
  MetricName,
  SimResponse,
  SweepRowPayload,
} from './types.js';

export interface SeriesPoint {
  n: number;
  mean: number;
  std: number;
  tooltip: string;
}

export interface Series {
  scenarioId: number;
  label: string;
  color: string;
  metric: MetricName;
  points: SeriesPoint[];
}

/** Rows of the slice a risk curve plots: one row per portfolio size. */
function curveRows(result: SimResponse): SweepRowPayload[] {
  const rows = result.result.rows.filter((row) => row.error === undefined);
  const byN = new Map<number, SweepRowPayload>();
  for (const row of rows) {
    // risk curves plot the first (r, bound, skill, policy) slice per N
    if (!byN.has(row.portfolio_size)) byN.set(row.portfolio_size, row);
  }
  return [...byN.values()].sort((a, b) => a.portfolio_size - b.portfolio_size);
}

export function tooltipFor(
  label: string,
  metric: string,
  n: number,
  mean: number,
  std: number,
): string {
  return `${label} | N=${n} | ${metric} = ${formatExact(mean)} (std ${formatExact(std)})`;
}

export function riskSeries(scenario: Scenario, metric: MetricName): Series | null {
  if (!scenario.result) return null;
  // charts must say which fidelity mode produced them
  const label = scenario.form.accurateMode
    ? scenario.label
    : `${scenario.label} [interactive]`;
  const points = curveRows(scenario.result).map((row) => {
    const stat = row.metrics![metric];
    return {
      n: row.portfolio_size,
      mean: stat.mean,
      std: stat.std,
      tooltip: tooltipFor(label, metric, row.portfolio_size, stat.mean, stat.std),
    };
  });
  return {
    scenarioId: scenario.id,
    label,
    color: scenario.color,
    metric,
    points,
  };
}

/** One series per scenario for a given metric; scenarios without results drop out. */
export function compareSeries(scenarios: readonly Scenario[], metric: MetricName): Series[] {
  return scenarios
    .map((s) => riskSeries(s, metric))
    .filter((s): s is Series => s !== null && s.points.length > 0);
}

export const FREQ_METRICS: MetricName[] = [
  'freq_2x',
  'freq_3x',
  'freq_4x',
  'freq_5x',
  'freq_6x',
  'freq_7x',
  'freq_8x',
  'freq_9x',
  'freq_10x',
];

/** The 2x..10x family for one scenario, in threshold order. */
export function freqFamily(scenario: Scenario): Series[] {
  return FREQ_METRICS.map((metric) => riskSeries(scenario, metric)).filter(
    (s): s is Series => s !== null,
  );
}
