// Thin client over the service wire protocol: unwraps envelopes and maps
// domain error codes. The console performs no state transitions except
// through these endpoints.

import type {
  DecisionRequest,
  DecisionResult,
  Envelope,
  EventsPage,
  GateCard,
  TaskView,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }

  get isConflict(): boolean {
    return this.status === 409 || this.code === "conflict" || this.code === "no_pending_gate";
  }
}

export class ServiceUnreachable extends Error {}

export interface ClientOptions {
  baseUrl?: string;
  expertId?: string;
  fetchImpl?: typeof fetch;
}

export class ApiClient {
  baseUrl: string;
  expertId: string;
  private readonly fetchImpl: typeof fetch;

  constructor(options: ClientOptions = {}) {
    this.baseUrl = (options.baseUrl ?? "").replace(/\/$/, "");
    this.expertId = options.expertId ?? "expert-console";
    this.fetchImpl = options.fetchImpl ?? fetch.bind(globalThis);
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, {
        method,
        headers: {
          "Content-Type": "application/json",
          "X-Expert-Id": this.expertId,
        },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ServiceUnreachable(`service unreachable: ${String(err)}`);
    }
    let envelope: Envelope<T>;
    try {
      envelope = (await response.json()) as Envelope<T>;
    } catch {
      throw new ApiError("bad_envelope", `non-JSON response (${response.status})`, response.status);
    }
    if (envelope.error !== undefined) {
      throw new ApiError(envelope.error.code, envelope.error.message, response.status);
    }
    if (envelope.payload === undefined) {
      throw new ApiError("bad_envelope", "envelope carries neither payload nor error", response.status);
    }
    return envelope.payload;
  }

  /** Pending gates and QA escalations for the expert, oldest first. */
  async fetchGateInbox(expertId?: string): Promise<GateCard[]> {
    const assignee = expertId ?? this.expertId;
    const query = assignee ? `?assignee=${encodeURIComponent(assignee)}` : "";
    const payload = await this.request<{ gates: GateCard[] }>("GET", `/api/gates${query}`);
    return payload.gates;
  }

  /** Exactly one call to the decision endpoint; conflicts bubble as ApiError. */
  async submitDecision(gateId: string, decision: DecisionRequest): Promise<DecisionResult> {
    return this.request<DecisionResult>("POST", `/api/gates/${encodeURIComponent(gateId)}/decision`, decision);
  }

  async fetchTask(taskId: string): Promise<TaskView> {
    return this.request<TaskView>("GET", `/api/tasks/${encodeURIComponent(taskId)}`);
  }

  async fetchEvents(taskId: string, sinceSeq = 0, limit = 200): Promise<EventsPage> {
    return this.request<EventsPage>(
      "GET",
      `/api/tasks/${encodeURIComponent(taskId)}/events?since_seq=${sinceSeq}&limit=${limit}`,
    );
  }

  /** Every audit entry, in seq order, across however many pages it takes. */
  async fetchFullTimeline(taskId: string, pageSize = 200): Promise<EventsPage["events"]> {
    const all: EventsPage["events"] = [];
    let since = 0;
    for (;;) {
      const page = await this.fetchEvents(taskId, since, pageSize);
      all.push(...page.events);
      if (page.next_seq >= page.total || page.events.length === 0) {
        return all;
      }
      since = page.next_seq;
    }
  }

  async submitTask(brief: Record<string, unknown>): Promise<{ task_id: string }> {
    return this.request<{ task_id: string }>("POST", "/api/tasks", { brief });
  }
}
