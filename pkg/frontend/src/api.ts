/** Thin typed client for the engine's HTTP endpoints. */

import type { ChatResponse, StatsResponse } from "./types.js";

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

/** Raised for any failed request: HTTP error status or unreachable server. */
export class ApiError extends Error {
  readonly status: number | undefined;

  constructor(message: string, status?: number) {
    super(message);
    this.name = "ApiError";
    this.status = status;
  }
}

export interface ChatOverrides {
  strategy?: string;
  threshold?: number;
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  /**
   * `baseUrl` is "" when the page is served by the engine itself (same
   * origin); tests pass an absolute http://host:port prefix.
   */
  constructor(baseUrl: string, fetchFn: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  /**
   * POST /api/chat. Overrides ride as query parameters so the server keeps
   * its own configuration as the default for untouched sessions.
   */
  async chat(
    sessionId: string,
    text: string,
    overrides: ChatOverrides = {},
  ): Promise<ChatResponse> {
    const params = new URLSearchParams();
    if (overrides.strategy !== undefined) {
      params.set("strategy", overrides.strategy);
    }
    if (overrides.threshold !== undefined) {
      params.set("threshold", String(overrides.threshold));
    }
    const query = params.size > 0 ? `?${params.toString()}` : "";
    const body = JSON.stringify({ session_id: sessionId, text });
    const response = await this.request(`/api/chat${query}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body,
    });
    return (await response.json()) as ChatResponse;
  }

  async stats(): Promise<StatsResponse> {
    const response = await this.request("/api/stats");
    return (await response.json()) as StatsResponse;
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    } catch {
      throw new ApiError("server unreachable — message not sent");
    }
    if (!response.ok) {
      throw new ApiError(
        `request failed (${response.status}): ${await describe(response)}`,
        response.status,
      );
    }
    return response;
  }
}

/** Pull the server's error code out of a failure body, if it sent one. */
async function describe(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as Record<string, unknown>;
    if (typeof body.error === "string") {
      return body.error;
    }
    if (typeof body.status === "string") {
      return body.status;
    }
  } catch {
    // Non-JSON body; fall through to the generic description.
  }
  return "unexpected response";
}
