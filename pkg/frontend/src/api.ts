/** Thin HTTP client for the session gateway. */

import type { Choice, CreateSessionRequest, SessionView } from "./types.js";

export class GatewayError extends Error {
  constructor(
    message: string,
    public readonly status: number,
  ) {
    super(message);
    this.name = "GatewayError";
  }
}

export class GatewayClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  async createSession(request: CreateSessionRequest): Promise<SessionView> {
    return this.request("POST", "/sessions", request);
  }

  async getSession(id: string): Promise<SessionView> {
    return this.request("GET", `/sessions/${id}`);
  }

  /**
   * Submit one answer. The idempotency token makes network retries safe:
   * replaying the same token returns the original result without
   * reapplying the answer.
   */
  async answer(id: string, choice: Choice, idempotencyToken: string): Promise<SessionView> {
    return this.request("POST", `/sessions/${id}/answer`, {
      choice,
      idempotency_token: idempotencyToken,
    });
  }

  stimulusUrl(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  private async request(method: string, path: string, body?: unknown): Promise<SessionView> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const payload = await response.json();
        detail = JSON.stringify(payload.detail ?? payload);
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new GatewayError(`${method} ${path} failed (${response.status}): ${detail}`, response.status);
    }
    return (await response.json()) as SessionView;
  }
}
