/** Scenario form state and its mapping onto canonical request plans. */

import type { Selectivity, SimRequest, SweepPlan, TicketPolicy } from './types.js';
import { validateForm } from './validation.js';

export type TicketKind = 'uniform' | 'random_ratio' | 'quality_proportional';

export interface ScenarioForm {
  worldAlpha: number;
  xMin: number;
  /** null = uncapped deal returns */
  bound: number | null;
  portfolioSizes: number[];
  ticketKind: TicketKind;
  maxMinRatio: number;
  noiseHalfwidth: number;
  reserveFractions: number[];
  selective: boolean;
  pFollowLow: number;
  pFollowHigh: number;
  dilutionFactor: number;
  skillAlpha: number;
  nFunds: number;
  nReplicates: number;
  poolSize: number;
  seed: number;
  /** false keeps runs interactive (10k funds); true is full accuracy (100k) */
  accurateMode: boolean;
}

export const INTERACTIVE_FUNDS = 10_000;
export const ACCURATE_FUNDS = 100_000;

/** The default portfolio-size grid used by the server presets. */
export const DEFAULT_SIZES = [
  1, 2, 3, 5, 7, 10, 15, 20, 30, 40, 50, 75, 100, 150, 200, 250, 300,
];

export function defaultForm(): ScenarioForm {
  return {
    worldAlpha: 2.05,
    xMin: 0.35,
    bound: null,
    portfolioSizes: [...DEFAULT_SIZES],
    ticketKind: 'uniform',
    maxMinRatio: 1,
    noiseHalfwidth: 0.25,
    reserveFractions: [0],
    selective: false,
    pFollowLow: 0.7,
    pFollowHigh: 0.9,
    dilutionFactor: 3,
    skillAlpha: 2.05,
    nFunds: ACCURATE_FUNDS,
    nReplicates: 20,
    poolSize: 60_000,
    seed: 0,
    accurateMode: true,
  };
}

function ticketPolicy(form: ScenarioForm): TicketPolicy {
  switch (form.ticketKind) {
    case 'uniform':
      return { kind: 'uniform' };
    case 'random_ratio':
      return { kind: 'random_ratio', max_min_ratio: form.maxMinRatio };
    case 'quality_proportional':
      return {
        kind: 'quality_proportional',
        max_min_ratio: form.maxMinRatio,
        noise_halfwidth: form.noiseHalfwidth,
      };
  }
}

function selectivity(form: ScenarioForm): Selectivity {
  if (!form.selective) return { kind: 'all' };
  return {
    kind: 'selective',
    p_follow_low: form.pFollowLow,
    p_follow_high: form.pFollowHigh,
  };
}

/**
 * Build the canonical plan for a form. The field values are exactly what
 * the CLI would produce for the same parameters, so default scenarios
 * hash-match the server's presets and hit its cache.
 */
export function buildPlan(form: ScenarioForm): SweepPlan {
  const errors = validateForm(form);
  if (errors.length > 0) {
    throw new Error(`invalid scenario: ${errors.map((e) => e.message).join('; ')}`);
  }
  return {
    portfolio_sizes: [...form.portfolioSizes],
    bounds: [form.bound],
    reserve_fractions: [...form.reserveFractions],
    world_alpha: form.worldAlpha,
    x_min: form.xMin,
    skill_alphas: [form.skillAlpha],
    ticket_policies: [ticketPolicy(form)],
    selectivities: [selectivity(form)],
    dilution_factor: form.dilutionFactor,
    n_funds: form.accurateMode ? form.nFunds : Math.min(form.nFunds, INTERACTIVE_FUNDS),
    n_replicates: form.nReplicates,
    pool_size: form.poolSize,
    master_seed: form.seed,
  };
}

export function buildRequest(form: ScenarioForm, cache = true): SimRequest {
  return { plan: buildPlan(form), cache };
}
