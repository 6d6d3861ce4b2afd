import { readFileSync } from 'node:fs';
import { join } from 'node:path';

import { describe, expect, it } from 'vitest';

import { buildPlan, defaultForm } from '../src/form';
import { ScenarioStore, exportScenarios } from '../src/scenarios';
import type { SimResponse } from '../src/types';

const baseline = JSON.parse(
  readFileSync(join(__dirname, 'fixtures', 'baseline.json'), 'utf-8'),
) as SimResponse;

describe('scenario comparison set', () => {
  it('duplicate copies the form and differs only in edited fields', () => {
    const store = new ScenarioStore();
    const original = store.add(defaultForm(), 'baseline');
    const copy = store.duplicate(original.id);
    expect(copy.form).toEqual(original.form);
    expect(copy.label).not.toBe(original.label);
    store.edit(copy.id, { skillAlpha: 1.85 });
    expect(store.get(copy.id)!.form.skillAlpha).toBe(1.85);
    expect(store.get(original.id)!.form.skillAlpha).toBe(2.05);
    const { skillAlpha: a, ...restCopy } = store.get(copy.id)!.form;
    const { skillAlpha: b, ...restOriginal } = store.get(original.id)!.form;
    expect(restCopy).toEqual(restOriginal);
  });

  it('removal never touches the other scenarios or their results', () => {
    const store = new ScenarioStore();
    const keep = store.add(defaultForm(), 'keep');
    const drop = store.add(defaultForm(), 'drop');
    const token = store.beginRequest(keep.id);
    store.applyResult(keep.id, token, baseline);
    const resultBefore = store.get(keep.id)!.result;
    store.remove(drop.id);
    expect(store.get(drop.id)).toBeUndefined();
    expect(store.get(keep.id)!.result).toBe(resultBefore);
  });

  it('labels stay unique within the set', () => {
    const store = new ScenarioStore();
    store.add(defaultForm(), 'fund');
    const second = store.add(defaultForm(), 'fund');
    expect(second.label).not.toBe('fund');
    expect(new Set(store.list().map((s) => s.label)).size).toBe(2);
  });

  it('empty set is the onboarding state', () => {
    expect(new ScenarioStore().isEmpty()).toBe(true);
  });

  it('stale responses are discarded after an edit', () => {
    const store = new ScenarioStore();
    const scenario = store.add(defaultForm(), 's');
    const staleToken = store.beginRequest(scenario.id);
    store.edit(scenario.id, { seed: 99 });
    expect(store.applyResult(scenario.id, staleToken, baseline)).toBe(false);
    expect(store.get(scenario.id)!.result).toBeNull();
    const freshToken = store.beginRequest(scenario.id);
    expect(store.applyResult(scenario.id, freshToken, baseline)).toBe(true);
    expect(store.get(scenario.id)!.result).toBe(baseline);
  });

  it('at most one in-flight request per scenario wins', () => {
    const store = new ScenarioStore();
    const scenario = store.add(defaultForm(), 's');
    const token = store.beginRequest(scenario.id);
    // a second begin on the same generation reuses the token; both carry
    // the same generation so the LAST applied response sticks
    const tokenAgain = store.beginRequest(scenario.id);
    expect(tokenAgain).toBe(token);
  });

  it('exports request-shaped JSON plus labels', () => {
    const store = new ScenarioStore();
    store.add(defaultForm(), 'baseline');
    const exported = exportScenarios(store, buildPlan);
    expect(exported).toHaveLength(1);
    expect(exported[0].label).toBe('baseline');
    expect(exported[0].plan).toEqual(buildPlan(defaultForm()));
  });
});
