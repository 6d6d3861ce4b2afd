/** Wire types mirroring the simulation service's JSON schemas. */

export type TicketPolicy =
  | { kind: 'uniform' }
  | { kind: 'random_ratio'; max_min_ratio: number }
  | { kind: 'quality_proportional'; max_min_ratio: number; noise_halfwidth: number };

export type Selectivity =
  | { kind: 'all' }
  | { kind: 'selective'; p_follow_low: number; p_follow_high: number };

export interface SweepPlan {
  portfolio_sizes: number[];
  bounds: (number | null)[];
  reserve_fractions: number[];
  world_alpha: number;
  x_min: number;
  skill_alphas: number[];
  ticket_policies: TicketPolicy[];
  selectivities: Selectivity[];
  dilution_factor: number;
  n_funds: number;
  n_replicates: number;
  pool_size: number;
  master_seed: number;
}

export interface SimRequest {
  plan: SweepPlan;
  cache?: boolean;
}

export interface MetricStat {
  mean: number;
  std: number;
}

export const METRIC_NAMES = [
  'p_loss',
  'min_return',
  'max_return',
  'mean_return',
  'freq_2x',
  'freq_3x',
  'freq_4x',
  'freq_5x',
  'freq_6x',
  'freq_7x',
  'freq_8x',
  'freq_9x',
  'freq_10x',
] as const;

export type MetricName = (typeof METRIC_NAMES)[number];

export interface SweepRowPayload {
  portfolio_size: number;
  bound: number | null;
  reserve_fraction: number;
  skill_alpha: number;
  ticket_policy: TicketPolicy;
  selectivity: Selectivity;
  metrics?: Record<string, MetricStat>;
  replicates?: unknown[];
  error?: string;
}

export interface SweepResultPayload {
  engine_version: string;
  plan: SweepPlan;
  rows: SweepRowPayload[];
}

export interface SimResponse {
  result: SweepResultPayload;
  elapsed_ms: number;
  cache_hit: boolean;
  engine_version: string;
}

export interface PresetEntry {
  name: string;
  description: string;
  plan: SweepPlan;
}
