import { SessionSummary, StartRunRequest, TraceResponse } from "./types.js";

export class ApiRequestError extends Error {
  constructor(readonly code: string, message: string, readonly field?: string) {
    super(message);
  }
}

async function asError(resp: Response): Promise<ApiRequestError> {
  try {
    const doc = await resp.json();
    return new ApiRequestError(doc.code ?? "http_error", doc.message ?? resp.statusText, doc.field);
  } catch {
    return new ApiRequestError("http_error", `${resp.status} ${resp.statusText}`);
  }
}

/** Thin client for the six session endpoints. */
export class ApiClient {
  constructor(readonly baseUrl: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await fetch(this.baseUrl + path, {
      method,
      headers: body !== undefined ? { "Content-Type": "application/json" } : undefined,
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    if (!resp.ok) {
      throw await asError(resp);
    }
    return (await resp.json()) as T;
  }

  createSession(instance: unknown): Promise<SessionSummary> {
    return this.request("POST", "/api/sessions", { instance });
  }

  startRun(sessionId: string, req: StartRunRequest): Promise<{ run_id: string; status: string }> {
    return this.request("POST", `/api/sessions/${sessionId}/runs`, req);
  }

  pollTrace(sessionId: string, runId: string, since: number): Promise<TraceResponse> {
    return this.request("GET", `/api/sessions/${sessionId}/runs/${runId}/trace?since=${since}`);
  }

  stopRun(sessionId: string, runId: string): Promise<{ run_id: string; status: string }> {
    return this.request("POST", `/api/sessions/${sessionId}/runs/${runId}/stop`);
  }

  async exportRun(sessionId: string, runId: string, format: string): Promise<string> {
    const resp = await fetch(
      `${this.baseUrl}/api/sessions/${sessionId}/runs/${runId}/export?format=${format}`,
    );
    if (!resp.ok) {
      throw await asError(resp);
    }
    return resp.text();
  }
}
