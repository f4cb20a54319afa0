import { describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError, ServiceUnreachable } from "../src/api.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), { status, headers: { "Content-Type": "application/json" } });
}

function clientWith(handler: (url: string, init?: RequestInit) => Response | Promise<Response>) {
  const fetchImpl = vi.fn(async (input: RequestInfo | URL, init?: RequestInit) =>
    handler(String(input), init),
  ) as unknown as typeof fetch;
  return { client: new ApiClient({ baseUrl: "http://svc", expertId: "x-7", fetchImpl }), fetchImpl };
}

describe("envelope handling", () => {
  it("unwraps payloads", async () => {
    const { client } = clientWith(() => jsonResponse({ request_id: "r", payload: { gates: [] } }));
    expect(await client.fetchGateInbox()).toEqual([]);
  });

  it("maps error envelopes to ApiError with code and status", async () => {
    const { client } = clientWith(() =>
      jsonResponse({ request_id: "r", error: { code: "conflict", message: "already decided" } }, 409),
    );
    const err = await client
      .submitDecision("t:1", { decision: "approve", notes: "" })
      .catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).code).toBe("conflict");
    expect((err as ApiError).isConflict).toBe(true);
  });

  it("wraps network failures as ServiceUnreachable", async () => {
    const { client } = clientWith(() => {
      throw new TypeError("ECONNREFUSED");
    });
    await expect(client.fetchGateInbox()).rejects.toBeInstanceOf(ServiceUnreachable);
  });
});

describe("requests", () => {
  it("submitDecision makes exactly one POST with the expert header", async () => {
    const { client, fetchImpl } = clientWith(() =>
      jsonResponse({ request_id: "r", payload: { task_id: "t", state: {}, status: "running" } }),
    );
    await client.submitDecision("t:2", { decision: "reject_with_notes", notes: "redo" });
    expect(fetchImpl).toHaveBeenCalledTimes(1);
    const [url, init] = (fetchImpl as unknown as { mock: { calls: [string, RequestInit][] } }).mock.calls[0];
    expect(url).toBe("http://svc/api/gates/t%3A2/decision");
    expect(init.method).toBe("POST");
    expect((init.headers as Record<string, string>)["X-Expert-Id"]).toBe("x-7");
    expect(JSON.parse(String(init.body))).toEqual({ decision: "reject_with_notes", notes: "redo" });
  });

  it("inbox passes the assignee filter", async () => {
    const { client, fetchImpl } = clientWith(() => jsonResponse({ request_id: "r", payload: { gates: [] } }));
    await client.fetchGateInbox("qa_expert");
    const [url] = (fetchImpl as unknown as { mock: { calls: [string][] } }).mock.calls[0];
    expect(url).toBe("http://svc/api/gates?assignee=qa_expert");
  });
});

describe("fetchFullTimeline pagination", () => {
  function pagedClient(total: number, pageSize: number) {
    const all = Array.from({ length: total }, (_, seq) => ({
      seq,
      wall_time: seq,
      actor: "system",
      kind: "k",
      payload: {},
    }));
    return {
      all,
      ...clientWith((url) => {
        const params = new URL(url).searchParams;
        const since = Number(params.get("since_seq"));
        const limit = Number(params.get("limit"));
        const page = all.slice(since, since + Math.min(limit, pageSize));
        return jsonResponse({
          request_id: "r",
          payload: { events: page, next_seq: since + page.length, total: all.length },
        });
      }),
    };
  }

  it("unions pages into the full gapless event list", async () => {
    const { client, fetchImpl } = pagedClient(7, 3);
    const events = await client.fetchFullTimeline("t-1", 3);
    expect(events.map((e) => e.seq)).toEqual([0, 1, 2, 3, 4, 5, 6]);
    expect(fetchImpl).toHaveBeenCalledTimes(3);
  });

  it("a 500-event task pages cleanly and the union equals the event list", async () => {
    const { client, all } = pagedClient(500, 200);
    const events = await client.fetchFullTimeline("t-big", 200);
    expect(events).toHaveLength(500);
    expect(events.map((e) => e.seq)).toEqual(all.map((e) => e.seq));
  });
});
