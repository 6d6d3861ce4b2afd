/** Client-side validation; the rules are exactly the plan invariants. */

import type { ScenarioForm } from './form.js';

export interface FieldError {
  field: keyof ScenarioForm;
  message: string;
}

const MAX_SEED = 2 ** 64;

export function validateForm(form: ScenarioForm): FieldError[] {
  const errors: FieldError[] = [];
  const bad = (field: keyof ScenarioForm, message: string) =>
    errors.push({ field, message });

  if (!(form.worldAlpha > 1 + 1e-9)) {
    bad('worldAlpha', `alpha must be > 1 (got ${form.worldAlpha})`);
  }
  if (!(form.xMin > 0 && form.xMin < 1)) {
    bad('xMin', `x_min must be in (0, 1) (got ${form.xMin})`);
  }
  if (form.bound !== null && !(form.bound > 1)) {
    bad('bound', `the return cap must be > 1 (got ${form.bound})`);
  }
  if (form.portfolioSizes.length === 0) {
    bad('portfolioSizes', 'portfolio_sizes must be non-empty');
  }
  for (const n of form.portfolioSizes) {
    if (!Number.isInteger(n) || n < 1) {
      bad('portfolioSizes', `portfolio sizes must be >= 1 (got ${n})`);
      break;
    }
  }
  if (form.reserveFractions.length === 0) {
    bad('reserveFractions', 'reserve_fractions must be non-empty');
  }
  for (const r of form.reserveFractions) {
    if (!(r >= 0 && r < 1)) {
      bad('reserveFractions', `reserve_fraction must be in [0, 1) (got ${r})`);
      break;
    }
  }
  if (!(form.skillAlpha > 1 + 1e-9)) {
    bad('skillAlpha', `skill alpha must be > 1 (got ${form.skillAlpha})`);
  }
  if (form.ticketKind !== 'uniform' && !(form.maxMinRatio >= 1)) {
    bad('maxMinRatio', `max_min_ratio must be >= 1 (got ${form.maxMinRatio})`);
  }
  if (
    form.ticketKind === 'quality_proportional' &&
    !(form.noiseHalfwidth >= 0 && form.noiseHalfwidth < 1)
  ) {
    bad('noiseHalfwidth', `noise_halfwidth must be in [0, 1) (got ${form.noiseHalfwidth})`);
  }
  if (form.selective) {
    for (const [field, p] of [
      ['pFollowLow', form.pFollowLow],
      ['pFollowHigh', form.pFollowHigh],
    ] as const) {
      if (!(p >= 0 && p <= 1)) {
        bad(field, `follow probabilities must be in [0, 1] (got ${p})`);
      }
    }
  }
  if (!(form.dilutionFactor > 0)) {
    bad('dilutionFactor', `dilution_factor must be > 0 (got ${form.dilutionFactor})`);
  }
  if (!Number.isInteger(form.nFunds) || form.nFunds < 1) {
    bad('nFunds', `n_funds must be >= 1 (got ${form.nFunds})`);
  }
  if (!Number.isInteger(form.nReplicates) || form.nReplicates < 1) {
    bad('nReplicates', `n_replicates must be >= 1 (got ${form.nReplicates})`);
  }
  if (!Number.isInteger(form.poolSize) || form.poolSize < 1) {
    bad('poolSize', `pool_size must be >= 1 (got ${form.poolSize})`);
  }
  const maxSize = Math.max(...form.portfolioSizes, 1);
  if (form.portfolioSizes.length > 0 && maxSize > form.poolSize) {
    bad('portfolioSizes', `portfolio size ${maxSize} exceeds pool size ${form.poolSize}`);
  }
  if (!Number.isInteger(form.seed) || form.seed < 0 || form.seed >= MAX_SEED) {
    bad('seed', `master_seed must be a 64-bit unsigned integer (got ${form.seed})`);
  }
  return errors;
}
