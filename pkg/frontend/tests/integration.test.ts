// Round trip against a live service instance: approve advances the task
// past its gate wait, reject routes the step to rework, and a racing
// decision surfaces a conflict without corrupting state.

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { type ChildProcess, spawn } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { ApiClient, ApiError } from "../src/api.js";

const PYTHON = process.env.PYTHON ?? "python3";

let proc: ChildProcess;
let client: ApiClient;

async function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const server = createServer();
    server.listen(0, "127.0.0.1", () => {
      const address = server.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port"));
        return;
      }
      const { port } = address;
      server.close(() => resolve(port));
    });
  });
}

async function waitFor(url: string, timeoutMs = 30_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      await fetch(url);
      return;
    } catch {
      await new Promise((r) => setTimeout(r, 150));
    }
  }
  throw new Error(`service at ${url} did not come up`);
}

const GATED_BRIEF = {
  area: "Operations",
  category: "Collect Data",
  brief_text: "Console integration task: collect supplier records.",
  acceptance_criteria: ["has_file:report", "row_count>=30"],
};

async function submitAndFindGate(): Promise<{ taskId: string; gateId: string; version: number }> {
  const { task_id } = await client.submitTask(GATED_BRIEF);
  const gates = await client.fetchGateInbox();
  const gate = gates.find((g) => g.task_id === task_id && g.kind === "step_gate");
  expect(gate).toBeDefined();
  return { taskId: task_id, gateId: gate!.gate_id, version: gate!.version };
}

beforeAll(async () => {
  const root = mkdtempSync(join(tmpdir(), "gw-console-"));
  const port = await freePort();
  proc = spawn(
    PYTHON,
    ["-m", "gatework.service.cli", "serve", "--root", join(root, "store"), "--port", String(port)],
    { stdio: "ignore" },
  );
  await waitFor(`http://127.0.0.1:${port}/api/gates`);
  client = new ApiClient({ baseUrl: `http://127.0.0.1:${port}`, expertId: "console-x1" });
}, 40_000);

afterAll(() => {
  proc?.kill("SIGKILL");
});

describe("console round trip", () => {
  it("approving a pending gate advances the task out of the gate wait", async () => {
    const { taskId, gateId } = await submitAndFindGate();
    const result = await client.submitDecision(gateId, { decision: "approve", notes: "" });
    expect(result.state.pending_gates).toEqual([]);

    // verified against the events endpoint: approval recorded, then completion
    const events = await client.fetchFullTimeline(taskId);
    const kinds = events.map((e) => e.kind);
    expect(kinds).toContain("gate_approved");
    const approvedSeq = events.find((e) => e.kind === "gate_approved")!.seq;
    const completions = events.filter((e) => e.kind === "step_completed").map((e) => e.seq);
    expect(Math.max(...completions)).toBeGreaterThan(approvedSeq);
    expect(result.state.phase).toBe("finalized");

    // the decided gate left the inbox
    const gates = await client.fetchGateInbox();
    expect(gates.find((g) => g.gate_id === gateId)).toBeUndefined();
  });

  it("rejecting routes the step to rework and requests a fresh gate", async () => {
    const { taskId, gateId } = await submitAndFindGate();
    await client.submitDecision(gateId, { decision: "reject_with_notes", notes: "tighten verification" });

    const events = await client.fetchFullTimeline(taskId);
    const kinds = events.map((e) => e.kind);
    expect(kinds).toContain("gate_rejected");
    expect(kinds.filter((k) => k === "gate_requested").length).toBeGreaterThanOrEqual(2);

    const view = await client.fetchTask(taskId);
    expect(view.plan?.revision).toBeGreaterThanOrEqual(1);
    // the step is pending again behind a new gate; decide it to completion
    const gates = await client.fetchGateInbox();
    const fresh = gates.find((g) => g.task_id === taskId);
    expect(fresh).toBeDefined();
    const done = await client.submitDecision(fresh!.gate_id, { decision: "approve", notes: "" });
    expect(done.state.phase).toBe("finalized");
  });

  it("a racing decision surfaces a conflict without corrupting state", async () => {
    const { taskId, gateId } = await submitAndFindGate();
    const race = await Promise.allSettled([
      client.submitDecision(gateId, { decision: "approve", notes: "" }),
      client.submitDecision(gateId, { decision: "reject_with_notes", notes: "me first" }),
    ]);
    const fulfilled = race.filter((r) => r.status === "fulfilled");
    const rejected = race.filter((r) => r.status === "rejected") as PromiseRejectedResult[];
    expect(fulfilled).toHaveLength(1);
    expect(rejected).toHaveLength(1);
    expect(rejected[0].reason).toBeInstanceOf(ApiError);
    expect((rejected[0].reason as ApiError).isConflict).toBe(true);

    // state uncorrupted: exactly one decision event, version == event count
    const events = await client.fetchFullTimeline(taskId);
    const decisions = events.filter((e) => e.kind === "gate_approved" || e.kind === "gate_rejected");
    expect(decisions).toHaveLength(1);
    const view = await client.fetchTask(taskId);
    expect(view.state.version).toBe(events.length);
    expect(events.map((e) => e.seq)).toEqual(events.map((_, i) => i));
  });

  it("edit_and_approve replaces the step description before proceeding", async () => {
    const { taskId, gateId } = await submitAndFindGate();
    await client.submitDecision(gateId, {
      decision: "edit_and_approve",
      notes: "",
      edited_description: "verify EU rows only",
    });
    const view = await client.fetchTask(taskId);
    const edited = view.plan?.steps.find((s) => s.description === "verify EU rows only");
    expect(edited).toBeDefined();
    const events = await client.fetchFullTimeline(taskId);
    expect(events.map((e) => e.kind)).toContain("gate_edited");
  });

  it("timeline pagination unions to the exact event list", async () => {
    const { taskId, gateId } = await submitAndFindGate();
    await client.submitDecision(gateId, { decision: "approve", notes: "" });
    const paged = await client.fetchFullTimeline(taskId, 4);
    const single = (await client.fetchEvents(taskId, 0, 10_000)).events;
    expect(paged).toEqual(single);
    expect(paged.map((e) => e.seq)).toEqual(single.map((_, i) => i));
  });
});
