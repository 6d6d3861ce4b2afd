/** Thin client for the simulation service. */

import type { PresetEntry, SimRequest, SimResponse } from './types.js';

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

async function detail(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: string };
    return body.detail ?? response.statusText;
  } catch {
    return response.statusText;
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  async simulate(request: SimRequest): Promise<SimResponse> {
    const response = await this.fetchImpl(`${this.baseUrl}/api/v1/simulate`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(request),
    });
    if (!response.ok) throw new ApiError(response.status, await detail(response));
    return (await response.json()) as SimResponse;
  }

  async presets(): Promise<PresetEntry[]> {
    const response = await this.fetchImpl(`${this.baseUrl}/api/v1/presets`);
    if (!response.ok) throw new ApiError(response.status, await detail(response));
    const body = (await response.json()) as { presets: PresetEntry[] };
    return body.presets;
  }

  async health(): Promise<boolean> {
    try {
      const response = await this.fetchImpl(`${this.baseUrl}/api/v1/health`);
      return response.ok;
    } catch {
      return false;
    }
  }
}
