/** Thin typed client for the explanation service; no other backend contact. */

import type {
  AskBody,
  CreateSessionResponse,
  GraphResponse,
  ModelSummary,
  Turn,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }

  /** status 0 means the service was unreachable (no HTTP response at all). */
  get unreachable(): boolean {
    return this.status === 0;
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async listModels(): Promise<ModelSummary[]> {
    const body = await this.request<{ models: ModelSummary[] }>("GET", "/models");
    return body.models;
  }

  getGraph(model: string): Promise<GraphResponse> {
    return this.request("GET", `/models/${encodeURIComponent(model)}/graph`);
  }

  createSession(model: string): Promise<CreateSessionResponse> {
    return this.request("POST", "/sessions", { model });
  }

  ask(sessionId: string, question: AskBody): Promise<Turn> {
    return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/ask`, question);
  }

  history(sessionId: string): Promise<Turn[]> {
    return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}/history`);
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, {
        method,
        headers: body === undefined ? undefined : { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError(0, "ConnectionFailed", String(err));
    }
    if (!response.ok) {
      let code = "UnknownError";
      let detail = `${response.status}`;
      try {
        const payload = (await response.json()) as { error?: string; detail?: string };
        code = payload.error ?? code;
        detail = payload.detail ?? detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, code, detail);
    }
    return (await response.json()) as T;
  }
}
