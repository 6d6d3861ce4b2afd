/** DOM shell: form editing, scenario comparison, charts. */

import { ApiClient } from './api.js';
import { buildPlan, buildRequest, defaultForm, type ScenarioForm } from './form.js';
import { HeatmapAxesError, heatmapGrid } from './heatmap.js';
import { ScenarioStore, exportScenarios } from './scenarios.js';
import { compareSeries, freqFamily } from './series.js';
import { renderHeatmap, renderLineChart } from './svg.js';
import type { MetricName } from './types.js';
import { validateForm } from './validation.js';

const store = new ScenarioStore();
let selectedId: number | null = null;
let client = new ApiClient(defaultServiceUrl());

function defaultServiceUrl(): string {
  const saved = localStorage.getItem('fundsim.service');
  return saved ?? `${location.protocol}//${location.host}`;
}

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

function numberInput(id: string): number {
  return Number(($(id) as HTMLInputElement).value);
}

function listInput(id: string): number[] {
  return ($(id) as HTMLInputElement).value
    .split(',')
    .map((part) => part.trim())
    .filter((part) => part.length > 0)
    .map(Number);
}

function readForm(): ScenarioForm {
  const boundRaw = ($('f-bound') as HTMLInputElement).value.trim().toLowerCase();
  return {
    worldAlpha: numberInput('f-world-alpha'),
    xMin: numberInput('f-xmin'),
    bound: boundRaw === '' || boundRaw === 'inf' ? null : Number(boundRaw),
    portfolioSizes: listInput('f-sizes'),
    ticketKind: ($('f-ticket') as HTMLSelectElement).value as ScenarioForm['ticketKind'],
    maxMinRatio: numberInput('f-ratio'),
    noiseHalfwidth: numberInput('f-noise'),
    reserveFractions: listInput('f-reserves'),
    selective: ($('f-selective') as HTMLInputElement).checked,
    pFollowLow: numberInput('f-plow'),
    pFollowHigh: numberInput('f-phigh'),
    dilutionFactor: numberInput('f-dilution'),
    skillAlpha: numberInput('f-skill-alpha'),
    nFunds: numberInput('f-funds'),
    nReplicates: numberInput('f-replicates'),
    poolSize: numberInput('f-pool'),
    seed: numberInput('f-seed'),
    accurateMode: ($('f-accurate') as HTMLInputElement).checked,
  };
}

function writeForm(form: ScenarioForm): void {
  ($('f-world-alpha') as HTMLInputElement).value = String(form.worldAlpha);
  ($('f-xmin') as HTMLInputElement).value = String(form.xMin);
  ($('f-bound') as HTMLInputElement).value = form.bound === null ? 'inf' : String(form.bound);
  ($('f-sizes') as HTMLInputElement).value = form.portfolioSizes.join(', ');
  ($('f-ticket') as HTMLSelectElement).value = form.ticketKind;
  ($('f-ratio') as HTMLInputElement).value = String(form.maxMinRatio);
  ($('f-noise') as HTMLInputElement).value = String(form.noiseHalfwidth);
  ($('f-reserves') as HTMLInputElement).value = form.reserveFractions.join(', ');
  ($('f-selective') as HTMLInputElement).checked = form.selective;
  ($('f-plow') as HTMLInputElement).value = String(form.pFollowLow);
  ($('f-phigh') as HTMLInputElement).value = String(form.pFollowHigh);
  ($('f-dilution') as HTMLInputElement).value = String(form.dilutionFactor);
  ($('f-skill-alpha') as HTMLInputElement).value = String(form.skillAlpha);
  ($('f-funds') as HTMLInputElement).value = String(form.nFunds);
  ($('f-replicates') as HTMLInputElement).value = String(form.nReplicates);
  ($('f-pool') as HTMLInputElement).value = String(form.poolSize);
  ($('f-seed') as HTMLInputElement).value = String(form.seed);
  ($('f-accurate') as HTMLInputElement).checked = form.accurateMode;
}

function showErrors(messages: string[]): void {
  $('form-errors').innerHTML = messages
    .map((m) => `<li>${m.replace(/</g, '&lt;')}</li>`)
    .join('');
}

function renderScenarioList(): void {
  const container = $('scenario-list');
  if (store.isEmpty()) {
    container.innerHTML =
      '<p class="empty">No scenarios yet. Configure the form and press ' +
      '<b>Add scenario</b>, or start from a preset above.</p>';
    return;
  }
  container.innerHTML = store
    .list()
    .map((s) => {
      const status = s.pending ? 'running' : s.result ? `${s.result.elapsed_ms.toFixed(0)} ms` : 'not run';
      const mode = s.form.accurateMode ? 'accurate' : 'interactive';
      const active = s.id === selectedId ? ' active' : '';
      return (
        `<div class="scenario${active}" data-id="${s.id}">` +
        `<span class="swatch" style="background:${s.color}"></span>` +
        `<span class="label">${s.label}</span>` +
        `<span class="status">${status} | ${mode}</span>` +
        `<button data-action="run" data-id="${s.id}">run</button>` +
        `<button data-action="duplicate" data-id="${s.id}">duplicate</button>` +
        `<button data-action="remove" data-id="${s.id}">remove</button>` +
        '</div>'
      );
    })
    .join('');
}

function renderCharts(): void {
  const metric = ($('chart-metric') as HTMLSelectElement).value as MetricName;
  const scenarios = store.list();
  $('risk-chart').innerHTML = renderLineChart(
    compareSeries(scenarios, metric),
    `${metric} vs portfolio size (mean and std band)`,
  );
  const selected = selectedId !== null ? store.get(selectedId) : undefined;
  const freqTarget = selected ?? scenarios.find((s) => s.result);
  $('freq-chart').innerHTML = freqTarget
    ? renderLineChart(
        freqFamily(freqTarget),
        `${freqTarget.label}: frequency of returning 2x-10x`,
      )
    : renderLineChart([], 'frequency of returning 2x-10x');
  const heatTarget = freqTarget;
  if (heatTarget?.result) {
    try {
      const grid = heatmapGrid(heatTarget.result, metric);
      $('heatmap').innerHTML = renderHeatmap(
        grid,
        `${heatTarget.label}: ${metric} by reserve fraction and portfolio size`,
      );
      return;
    } catch (err) {
      if (err instanceof HeatmapAxesError) {
        $('heatmap').innerHTML = `<p class="empty">${err.message}</p>`;
        return;
      }
      throw err;
    }
  }
  $('heatmap').innerHTML = '<p class="empty">run a scenario to see the reserve heat grid</p>';
}

function refresh(): void {
  renderScenarioList();
  renderCharts();
}

async function runScenario(id: number): Promise<void> {
  const scenario = store.get(id);
  if (!scenario) return;
  const errors = validateForm(scenario.form);
  if (errors.length > 0) {
    showErrors(errors.map((e) => e.message));
    return;
  }
  showErrors([]);
  const token = store.beginRequest(id);
  renderScenarioList();
  try {
    const response = await client.simulate(buildRequest(scenario.form));
    if (store.applyResult(id, token, response)) refresh();
  } catch (err) {
    const scenarioNow = store.get(id);
    if (scenarioNow && scenarioNow.generation === token) {
      scenarioNow.pending = false;
    }
    showErrors([err instanceof Error ? err.message : String(err)]);
    renderScenarioList();
  }
}

async function loadPresets(): Promise<void> {
  try {
    const presets = await client.presets();
    $('preset-bar').innerHTML = presets
      .map((p) => `<button data-preset="${p.name}" title="${p.description}">${p.name}</button>`)
      .join('');
  } catch {
    $('preset-bar').innerHTML = '<span class="empty">service unreachable; presets unavailable</span>';
  }
}

function applyPreset(name: string): void {
  void client.presets().then((presets) => {
    const entry = presets.find((p) => p.name === name);
    if (!entry) return;
    const plan = entry.plan;
    const policy = plan.ticket_policies[0];
    const sel = plan.selectivities[0];
    const form: ScenarioForm = {
      worldAlpha: plan.world_alpha,
      xMin: plan.x_min,
      bound: plan.bounds[0],
      portfolioSizes: [...plan.portfolio_sizes],
      ticketKind: policy.kind,
      maxMinRatio: 'max_min_ratio' in policy ? policy.max_min_ratio : 1,
      noiseHalfwidth: policy.kind === 'quality_proportional' ? policy.noise_halfwidth : 0.25,
      reserveFractions: [...plan.reserve_fractions],
      selective: sel.kind === 'selective',
      pFollowLow: sel.kind === 'selective' ? sel.p_follow_low : 0.7,
      pFollowHigh: sel.kind === 'selective' ? sel.p_follow_high : 0.9,
      dilutionFactor: plan.dilution_factor,
      skillAlpha: plan.skill_alphas[0],
      nFunds: plan.n_funds,
      nReplicates: plan.n_replicates,
      poolSize: plan.pool_size,
      seed: plan.master_seed,
      // keep the preset's exact plan so the request hash-matches the
      // server's catalog entry; uncheck accurate mode for faster runs
      accurateMode: true,
    };
    writeForm(form);
    showErrors([]);
  });
}

function wire(): void {
  writeForm(defaultForm());
  void loadPresets();

  $('service-url').addEventListener('change', () => {
    const url = ($('service-url') as HTMLInputElement).value.replace(/\/$/, '');
    localStorage.setItem('fundsim.service', url);
    client = new ApiClient(url);
    void loadPresets();
  });
  ($('service-url') as HTMLInputElement).value = defaultServiceUrl();

  $('preset-bar').addEventListener('click', (ev) => {
    const name = (ev.target as HTMLElement).dataset?.preset;
    if (name) applyPreset(name);
  });

  $('add-scenario').addEventListener('click', () => {
    const form = readForm();
    const errors = validateForm(form);
    if (errors.length > 0) {
      showErrors(errors.map((e) => e.message));
      return;
    }
    showErrors([]);
    const label = ($('f-label') as HTMLInputElement).value.trim() || 'scenario';
    const scenario = store.add(form, label);
    selectedId = scenario.id;
    refresh();
    void runScenario(scenario.id);
  });

  $('scenario-list').addEventListener('click', (ev) => {
    const target = ev.target as HTMLElement;
    const idText = target.dataset?.id ?? target.closest('.scenario')?.getAttribute('data-id');
    if (!idText) return;
    const id = Number(idText);
    const action = target.dataset?.action;
    if (action === 'remove') {
      store.remove(id);
      if (selectedId === id) selectedId = null;
    } else if (action === 'duplicate') {
      const copy = store.duplicate(id);
      selectedId = copy.id;
      writeForm(copy.form);
    } else if (action === 'run') {
      void runScenario(id);
      return;
    } else {
      selectedId = id;
      const scenario = store.get(id);
      if (scenario) writeForm(scenario.form);
    }
    refresh();
  });

  $('apply-edits').addEventListener('click', () => {
    if (selectedId === null) return;
    const form = readForm();
    const errors = validateForm(form);
    if (errors.length > 0) {
      showErrors(errors.map((e) => e.message));
      return;
    }
    showErrors([]);
    store.edit(selectedId, form);
    refresh();
    void runScenario(selectedId);
  });

  $('chart-metric').addEventListener('change', renderCharts);

  $('export-scenarios').addEventListener('click', () => {
    const payload = JSON.stringify(exportScenarios(store, buildPlan), null, 2);
    const blob = new Blob([payload], { type: 'application/json' });
    const link = document.createElement('a');
    link.href = URL.createObjectURL(blob);
    link.download = 'fundsim-scenarios.json';
    link.click();
    URL.revokeObjectURL(link.href);
  });

  $('import-scenarios').addEventListener('change', async () => {
    const input = $('import-scenarios') as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    const entries = JSON.parse(await file.text()) as { label: string; plan: Record<string, unknown> }[];
    for (const entry of entries) {
      const plan = entry.plan as unknown as import('./types').SweepPlan;
      const policy = plan.ticket_policies[0];
      const sel = plan.selectivities[0];
      store.add(
        {
          worldAlpha: plan.world_alpha,
          xMin: plan.x_min,
          bound: plan.bounds[0],
          portfolioSizes: [...plan.portfolio_sizes],
          ticketKind: policy.kind,
          maxMinRatio: 'max_min_ratio' in policy ? policy.max_min_ratio : 1,
          noiseHalfwidth: policy.kind === 'quality_proportional' ? policy.noise_halfwidth : 0.25,
          reserveFractions: [...plan.reserve_fractions],
          selective: sel.kind === 'selective',
          pFollowLow: sel.kind === 'selective' ? sel.p_follow_low : 0.7,
          pFollowHigh: sel.kind === 'selective' ? sel.p_follow_high : 0.9,
          dilutionFactor: plan.dilution_factor,
          skillAlpha: plan.skill_alphas[0],
          nFunds: plan.n_funds,
          nReplicates: plan.n_replicates,
          poolSize: plan.pool_size,
          seed: plan.master_seed,
          accurateMode: true,
        },
        entry.label,
      );
    }
    input.value = '';
    refresh();
  });

  refresh();
}

document.addEventListener('DOMContentLoaded', wire);
