/** The comparison set: labeled scenarios with their latest results. */

import type { ScenarioForm } from './form.js';
import type { SimResponse } from './types.js';

export interface Scenario {
  id: number;
  label: string;
  color: string;
  form: ScenarioForm;
  result: SimResponse | null;
  /** set while a request is in flight */
  pending: boolean;
  /** bumps on every edit; stale responses are discarded against it */
  generation: number;
}

const PALETTE = [
  '#2563eb',
  '#dc2626',
  '#16a34a',
  '#9333ea',
  '#ea580c',
  '#0891b2',
  '#ca8a04',
  '#db2777',
];

export class ScenarioStore {
  private scenarios: Scenario[] = [];
  private nextId = 1;

  list(): readonly Scenario[] {
    return this.scenarios;
  }

  get(id: number): Scenario | undefined {
    return this.scenarios.find((s) => s.id === id);
  }

  isEmpty(): boolean {
    return this.scenarios.length === 0;
  }

  add(form: ScenarioForm, label?: string): Scenario {
    const scenario: Scenario = {
      id: this.nextId++,
      label: this.uniqueLabel(label ?? 'scenario'),
      color: PALETTE[(this.nextId - 2) % PALETTE.length],
      form: { ...form, portfolioSizes: [...form.portfolioSizes], reserveFractions: [...form.reserveFractions] },
      result: null,
      pending: false,
      generation: 0,
    };
    this.scenarios.push(scenario);
    return scenario;
  }

  /** Copy a scenario; the duplicate differs only in fields edited later. */
  duplicate(id: number): Scenario {
    const source = this.get(id);
    if (!source) throw new Error(`no scenario with id ${id}`);
    const copy = this.add(source.form, `${source.label} (copy)`);
    copy.result = source.result;
    return copy;
  }

  remove(id: number): void {
    this.scenarios = this.scenarios.filter((s) => s.id !== id);
  }

  /** Apply an edit and invalidate any in-flight request. */
  edit(id: number, patch: Partial<ScenarioForm>): Scenario {
    const scenario = this.get(id);
    if (!scenario) throw new Error(`no scenario with id ${id}`);
    scenario.form = { ...scenario.form, ...patch };
    scenario.generation += 1;
    scenario.pending = false;
    return scenario;
  }

  /** Mark a request as started and return the token to resolve it with. */
  beginRequest(id: number): number {
    const scenario = this.get(id);
    if (!scenario) throw new Error(`no scenario with id ${id}`);
    scenario.pending = true;
    return scenario.generation;
  }

  /**
   * Store a response unless the scenario was edited (or removed) since
   * the request started. Returns whether the response was accepted.
   */
  applyResult(id: number, token: number, result: SimResponse): boolean {
    const scenario = this.get(id);
    if (!scenario || scenario.generation !== token) return false;
    scenario.result = result;
    scenario.pending = false;
    return true;
  }

  private uniqueLabel(base: string): string {
    const taken = new Set(this.scenarios.map((s) => s.label));
    if (!taken.has(base)) return base;
    let i = 2;
    while (taken.has(`${base} ${i}`)) i += 1;
    return `${base} ${i}`;
  }
}

export interface ScenarioExport {
  label: string;
  plan: unknown;
  cache?: boolean;
}

/** Export the comparison set as request-shaped JSON plus labels. */
export function exportScenarios(
  store: ScenarioStore,
  buildPlanFn: (form: ScenarioForm) => unknown,
): ScenarioExport[] {
  return store.list().map((s) => ({ label: s.label, plan: buildPlanFn(s.form) }));
}
