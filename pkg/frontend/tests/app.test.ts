// @vitest-environment happy-dom
//
// ConsoleApp behavior against a scripted wire: optimistic updates,
// conflict rollback with banner, client-side validation.

import { beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { ConsoleApp } from "../src/app.js";
import type { Envelope, GateCard } from "../src/types.js";

function gate(id: string, kind: GateCard["kind"] = "step_gate"): GateCard {
  return {
    gate_id: id,
    task_id: id.split(":")[0],
    kind,
    step_index: kind === "step_gate" ? 1 : null,
    description: "check rows",
    risk: "medium",
    requested_at: 10,
    task_summary: "demo task",
    version: 5,
    attachments: [],
  };
}

interface Scripted {
  gates: GateCard[];
  decisionResponses: Array<{ status: number; body: Envelope<unknown> }>;
  decisionCalls: string[];
}

function makeApp(script: Scripted): { app: ConsoleApp; root: HTMLElement } {
  const fetchImpl = vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    if (url.includes("/decision")) {
      script.decisionCalls.push(String(init?.body));
      const next = script.decisionResponses.shift() ?? {
        status: 200,
        body: { request_id: "r", payload: { task_id: "t", state: {}, status: "running" } },
      };
      return new Response(JSON.stringify(next.body), { status: next.status });
    }
    if (url.includes("/api/gates")) {
      return new Response(JSON.stringify({ request_id: "r", payload: { gates: script.gates } }), { status: 200 });
    }
    throw new Error(`unexpected fetch: ${url}`);
  }) as unknown as typeof fetch;

  const root = document.createElement("main");
  document.body.innerHTML = "";
  document.body.appendChild(root);
  const api = new ApiClient({ baseUrl: "http://svc", expertId: "expert", fetchImpl });
  const app = new ConsoleApp(api, root, 3_600_000);
  return { app, root };
}

async function settle(): Promise<void> {
  for (let i = 0; i < 6; i += 1) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

beforeEach(() => {
  window.location.hash = "";
});

describe("ConsoleApp", () => {
  it("renders gate cards from the inbox", async () => {
    const script: Scripted = { gates: [gate("t-1:1"), gate("t-2:qa", "qa_escalation")], decisionResponses: [], decisionCalls: [] };
    const { app, root } = makeApp(script);
    app.start();
    await settle();
    expect(root.querySelectorAll(".gate-card")).toHaveLength(1); // step-gate tab
    expect(root.textContent).toContain("step gates (1)");
    expect(root.textContent).toContain("QA escalations (1)");
  });

  it("optimistically removes the card, then reconciles with the server", async () => {
    const pending = gate("t-1:1");
    const script: Scripted = { gates: [pending], decisionResponses: [], decisionCalls: [] };
    const { app, root } = makeApp(script);
    app.start();
    await settle();

    script.gates = []; // server truth after the decision
    await app.decide("t-1:1", "approve");
    await settle();
    expect(script.decisionCalls).toHaveLength(1);
    expect(root.querySelectorAll(".gate-card")).toHaveLength(0);
    expect(root.textContent).toContain("No pending step gates");
  });

  it("rolls back on conflict and shows the already-decided banner", async () => {
    const pending = gate("t-1:1");
    const script: Scripted = {
      gates: [pending],
      decisionResponses: [
        { status: 409, body: { request_id: "r", error: { code: "conflict", message: "already decided" } } },
      ],
      decisionCalls: [],
    };
    const { app, root } = makeApp(script);
    app.start();
    await settle();

    await app.decide("t-1:1", "approve");
    await settle();
    expect(root.querySelector(".banner.conflict")).not.toBeNull();
    expect(root.textContent).toContain("already decided");
    // inbox reconciled from the server (which still lists it in this script)
    expect(root.querySelectorAll(".gate-card")).toHaveLength(1);
  });

  it("requires notes to reject, without calling the service", async () => {
    const script: Scripted = { gates: [gate("t-1:1")], decisionResponses: [], decisionCalls: [] };
    const { app, root } = makeApp(script);
    app.start();
    await settle();

    await app.decide("t-1:1", "reject_with_notes");
    await settle();
    expect(script.decisionCalls).toHaveLength(0);
    expect(root.textContent).toContain("Rejection requires notes");
    expect(root.querySelectorAll(".gate-card")).toHaveLength(1);
  });
});
