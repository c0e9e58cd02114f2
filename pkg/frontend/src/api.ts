/** Typed client for the case service. All data flows through here. */

import type {
  BoundsEntryPayload,
  CasePayload,
  LintFindingPayload,
  PropagationPayload,
  SensitivityEntryPayload,
} from "./model.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function requestJson<T>(
  base: string,
  path: string,
  init?: RequestInit,
): Promise<T> {
  const response = await fetch(base + path, init);
  const payload = await response.json().catch(() => ({}));
  if (!response.ok) {
    const message =
      typeof (payload as { error?: unknown }).error === "string"
        ? (payload as { error: string }).error
        : `request failed with status ${response.status}`;
    throw new ApiError(response.status, message);
  }
  return payload as T;
}

export class ApiClient {
  constructor(readonly base: string = "") {}

  fetchCase(): Promise<CasePayload> {
    return requestJson(this.base, "/api/case");
  }

  fetchLint(): Promise<{ findings: LintFindingPayload[] }> {
    return requestJson(this.base, "/api/lint");
  }

  fetchSensitivity(): Promise<{
    delta: number;
    entries: SensitivityEntryPayload[];
  }> {
    return requestJson(this.base, "/api/sensitivity");
  }

  fetchBounds(): Promise<{ blocks: BoundsEntryPayload[] }> {
    return requestJson(this.base, "/api/bounds");
  }
}

/** Sends what-if requests with at most one in flight: starting a new
 * request aborts the previous one, so the view only ever reflects the
 * latest slider positions. */
export class WhatifChannel {
  private controller: AbortController | null = null;

  constructor(readonly base: string = "") {}

  async send(overrides: Record<string, number>): Promise<PropagationPayload> {
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    try {
      return await requestJson<PropagationPayload>(this.base, "/api/whatif", {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ overrides }),
        signal: controller.signal,
      });
    } finally {
      if (this.controller === controller) {
        this.controller = null;
      }
    }
  }

  /** Abort any request still in flight, e.g. when resetting. */
  cancel(): void {
    this.controller?.abort();
    this.controller = null;
  }
}

/** True for the rejection produced by a superseded what-if request. */
export function isAbort(error: unknown): boolean {
  return error instanceof DOMException && error.name === "AbortError";
}
