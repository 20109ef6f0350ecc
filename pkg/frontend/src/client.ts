import { consumeTurnStream, type ConsumeOptions } from "./stream.js";
import { turnFromEvents } from "./turn.js";
import type {
  EvalJob,
  EvaluationReport,
  Frame,
  GatewayErrorBody,
  Health,
  SessionMeta,
  StateResponse,
  TurnRecord,
} from "./types.js";

export class GatewayError extends Error {
  constructor(
    readonly status: number,
    readonly errorType: string,
    message: string,
  ) {
    super(message);
    this.name = "GatewayError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

// Thin client over the gateway HTTP API. One base URL is the only
// configuration; fetch is injectable so tests can run without a server.
export class GatewayClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) =>
      fetch(input, init),
  ) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const res = await this.fetchImpl(this.url(path), init);
    if (!res.ok) {
      let type = "HttpError";
      let message = `${res.status} on ${path}`;
      try {
        const body = (await res.json()) as GatewayErrorBody;
        type = body.error.type;
        message = body.error.message;
      } catch {
        // non-JSON error body; keep the generic message
      }
      throw new GatewayError(res.status, type, message);
    }
    return res;
  }

  private async getJson<T>(path: string): Promise<T> {
    return (await this.request(path)).json() as Promise<T>;
  }

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const res = await this.request(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    return res.json() as Promise<T>;
  }

  healthz(): Promise<Health> {
    return this.getJson("/healthz");
  }

  state(path: string, params?: Record<string, string>): Promise<StateResponse> {
    const qs = params ? "?" + new URLSearchParams(params).toString() : "";
    return this.getJson(`/state/${path}${qs}`);
  }

  createSession(persona: string): Promise<SessionMeta> {
    return this.postJson("/sessions", { persona });
  }

  tick(n: number): Promise<{ advanced: number; tick: number; state_version: number }> {
    return this.postJson("/sim/tick", { n });
  }

  // Sends one message and consumes the server-streamed frames. The POST
  // body stream cannot be re-opened server-side, so reconnects are not
  // attempted here; callers that replay recorded traces use
  // consumeTurnStream directly with a resumable connector.
  async sendMessage(
    sessionId: string,
    text: string,
    options: ConsumeOptions = {},
  ): Promise<{ frames: Frame[]; turn: TurnRecord }> {
    const connect = async function* (
      this: GatewayClient,
    ): AsyncIterable<string> {
      const res = await this.request(`/sessions/${sessionId}/message`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ text }),
      });
      if (res.body === null) {
        yield await res.text();
        return;
      }
      const reader = res.body.getReader();
      const decoder = new TextDecoder();
      for (;;) {
        const { done, value } = await reader.read();
        if (done) break;
        yield decoder.decode(value, { stream: true });
      }
    }.bind(this);

    const frames = await consumeTurnStream(connect, {
      ...options,
      maxReconnects: 0,
    });
    return { frames, turn: turnFromEvents(frames) };
  }

  submitEvalJob(body: {
    backend: string;
    suite?: string;
    script?: string;
    workers?: number;
  }): Promise<EvalJob> {
    return this.postJson("/eval/jobs", body);
  }

  jobStatus(id: string): Promise<EvalJob> {
    return this.getJson(`/eval/jobs/${id}`);
  }

  // Raw text on purpose: the eval view extracts KPI tokens from the JSON
  // bytes it received, so the report must not round-trip through Number.
  async jobReportRaw(id: string): Promise<string> {
    const res = await this.request(`/eval/jobs/${id}/report`);
    return res.text();
  }

  async jobReport(id: string): Promise<EvaluationReport> {
    return JSON.parse(await this.jobReportRaw(id)) as EvaluationReport;
  }
}
