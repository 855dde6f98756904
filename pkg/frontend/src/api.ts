/** Thin typed client for the route-generator HTTP API. */

import type { Candidate, ModelInfo } from "./types.js";

export interface DecodeOptions {
  k?: number | null;
  reachLimit?: number | null;
  signal?: AbortSignal;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown,
                           signal?: AbortSignal): Promise<T> {
    const resp = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers: body !== undefined ? { "Content-Type": "application/json" } : undefined,
      body: body !== undefined ? JSON.stringify(body) : undefined,
      signal,
    });
    const payload = await resp.json().catch(() => ({}));
    if (!resp.ok) {
      const message = (payload as { error?: string }).error ?? `HTTP ${resp.status}`;
      throw new ApiError(resp.status, message);
    }
    return payload as T;
  }

  modelInfo(signal?: AbortSignal): Promise<ModelInfo> {
    return this.request("GET", "/model/info", undefined, signal);
  }

  decode(latent: number[], opts: DecodeOptions = {}): Promise<Candidate> {
    const body: Record<string, unknown> = { latent };
    if (opts.k != null) body.k = opts.k;
    if (opts.reachLimit != null) body.reach_limit = opts.reachLimit;
    return this.request("POST", "/decode", body, opts.signal);
  }

  sample(seed: number, count = 1, opts: DecodeOptions = {}):
      Promise<{ seed: number; candidates: Candidate[] }> {
    const body: Record<string, unknown> = { seed, count };
    if (opts.reachLimit != null) body.reach_limit = opts.reachLimit;
    return this.request("POST", "/sample", body, opts.signal);
  }

  encode(holds: string[], signal?: AbortSignal):
      Promise<{ mu: number[]; logvar: number[] }> {
    return this.request("POST", "/encode", { holds }, signal);
  }

  interpolate(a: number[], b: number[], steps: number, opts: DecodeOptions = {}):
      Promise<{ candidates: Candidate[] }> {
    const body: Record<string, unknown> = { a, b, steps };
    if (opts.k != null) body.k = opts.k;
    if (opts.reachLimit != null) body.reach_limit = opts.reachLimit;
    return this.request("POST", "/interpolate", body, opts.signal);
  }
}

/** API base from the page URL (`?api=http://host:port`), defaulting to the
 * CLI's default serve address. */
export function apiBaseFromLocation(search: string): string {
  const params = new URLSearchParams(search);
  return params.get("api") ?? "http://127.0.0.1:8080";
}
