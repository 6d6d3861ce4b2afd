import { describe, expect, it } from 'vitest';

import { defaultForm } from '../src/form';
import { validateForm } from '../src/validation';

function messages(form: ReturnType<typeof defaultForm>): string[] {
  return validateForm(form).map((e) => e.message);
}

describe('form validation mirrors the plan invariants', () => {
  it('accepts the default form', () => {
    expect(validateForm(defaultForm())).toEqual([]);
  });

  it('rejects alpha at or below 1, naming the invariant', () => {
    const form = { ...defaultForm(), worldAlpha: 0.9 };
    expect(messages(form).some((m) => m.includes('alpha must be > 1'))).toBe(true);
    expect(messages({ ...defaultForm(), worldAlpha: 1 })).not.toEqual([]);
  });

  it('rejects x_min outside (0, 1)', () => {
    for (const xMin of [0, 1, 1.5, -0.2]) {
      expect(messages({ ...defaultForm(), xMin }).some((m) => m.includes('x_min'))).toBe(true);
    }
  });

  it('rejects caps at or below 1 but accepts uncapped', () => {
    expect(messages({ ...defaultForm(), bound: 1 })).not.toEqual([]);
    expect(messages({ ...defaultForm(), bound: null })).toEqual([]);
    expect(messages({ ...defaultForm(), bound: 50 })).toEqual([]);
  });

  it('rejects reserve fractions outside [0, 1)', () => {
    for (const r of [-0.1, 1]) {
      const form = { ...defaultForm(), reserveFractions: [r] };
      expect(messages(form).some((m) => m.includes('reserve_fraction'))).toBe(true);
    }
    expect(messages({ ...defaultForm(), reserveFractions: [0, 0.9] })).toEqual([]);
  });

  it('rejects ticket ratios below 1 when the policy uses them', () => {
    const form = { ...defaultForm(), ticketKind: 'random_ratio' as const, maxMinRatio: 0.5 };
    expect(messages(form).some((m) => m.includes('max_min_ratio'))).toBe(true);
    // a uniform policy ignores the ratio field
    expect(messages({ ...defaultForm(), maxMinRatio: 0.5 })).toEqual([]);
  });

  it('rejects follow probabilities outside [0, 1] when selective', () => {
    const form = { ...defaultForm(), selective: true, pFollowLow: 1.2 };
    expect(messages(form).some((m) => m.includes('follow probabilities'))).toBe(true);
  });

  it('rejects empty or fractional portfolio sizes', () => {
    expect(messages({ ...defaultForm(), portfolioSizes: [] })).not.toEqual([]);
    expect(messages({ ...defaultForm(), portfolioSizes: [2.5] })).not.toEqual([]);
  });

  it('rejects portfolios larger than the pool', () => {
    const form = { ...defaultForm(), portfolioSizes: [100_000] };
    expect(messages(form).some((m) => m.includes('exceeds pool size'))).toBe(true);
  });

  it('rejects non-positive simulation sizes and bad seeds', () => {
    expect(messages({ ...defaultForm(), nFunds: 0 })).not.toEqual([]);
    expect(messages({ ...defaultForm(), nReplicates: 0 })).not.toEqual([]);
    expect(messages({ ...defaultForm(), poolSize: 0 })).not.toEqual([]);
    expect(messages({ ...defaultForm(), seed: -1 })).not.toEqual([]);
    expect(messages({ ...defaultForm(), seed: 1.5 })).not.toEqual([]);
  });
});
