import { describe, expect, it } from "vitest";

import {
  describeEntry,
  escapeHtml,
  formatClock,
  renderConflictBanner,
  renderGateCard,
  renderInbox,
  renderTimeline,
} from "../src/render.js";
import type { AuditEntry, GateCard } from "../src/types.js";

function gate(overrides: Partial<GateCard> = {}): GateCard {
  return {
    gate_id: "t-1:2",
    task_id: "t-1",
    kind: "step_gate",
    step_index: 2,
    description: "Verify emails, phones, and totals against sources",
    risk: "high",
    requested_at: 1000,
    task_summary: "Collect 30 supplier records",
    version: 9,
    attachments: ["contacts.csv", "report.md"],
    ...overrides,
  };
}

function entry(seq: number, kind: string, payload: Record<string, unknown> = {}, wall = 0): AuditEntry {
  return { seq, wall_time: wall, actor: "system", kind, payload };
}

describe("escapeHtml", () => {
  it("neutralizes markup in user-supplied text", () => {
    expect(escapeHtml(`<img src=x onerror="pwn()">&`)).toBe(
      "&lt;img src=x onerror=&quot;pwn()&quot;&gt;&amp;",
    );
  });
});

describe("renderGateCard", () => {
  it("shows kind, risk badge, attachments, and decision controls", () => {
    const html = renderGateCard(gate());
    expect(html).toContain("step 2 gate");
    expect(html).toContain("risk-high");
    expect(html).toContain("contacts.csv");
    expect(html).toContain('data-action="approve"');
    expect(html).toContain('data-action="reject_with_notes"');
    expect(html).toContain('data-action="edit_and_approve"');
  });

  it("escapes hostile descriptions", () => {
    const html = renderGateCard(gate({ description: "<script>alert(1)</script>" }));
    expect(html).not.toContain("<script>alert(1)</script>");
    expect(html).toContain("&lt;script&gt;");
  });

  it("offers no edit control on QA escalations", () => {
    const html = renderGateCard(gate({ kind: "qa_escalation", step_index: null }));
    expect(html).toContain("offline QA escalation");
    expect(html).not.toContain("edit_and_approve");
  });
});

describe("renderInbox", () => {
  it("renders an explicit empty state", () => {
    expect(renderInbox([], "step_gate")).toContain("No pending step gates");
    expect(renderInbox([], "qa_escalation")).toContain("No pending QA escalations");
  });

  it("keeps only the selected kind, oldest-first order preserved", () => {
    const gates = [
      gate({ gate_id: "a:1", requested_at: 1 }),
      gate({ gate_id: "b:qa", kind: "qa_escalation", requested_at: 2 }),
      gate({ gate_id: "c:0", requested_at: 3 }),
    ];
    const html = renderInbox(gates, "step_gate");
    expect(html).toContain("a:1");
    expect(html).toContain("c:0");
    expect(html).not.toContain("b:qa");
    expect(html.indexOf("a:1")).toBeLessThan(html.indexOf("c:0"));
  });
});

describe("renderTimeline", () => {
  it("renders every entry once, in seq order, with elapsed clocks", () => {
    const entries = [
      entry(0, "task_submitted", {}, 0),
      entry(1, "clarification_started", {}, 90_000),
      entry(2, "gate_approved", { step_index: 1, decided_by: "x-1" }, 3_600_000),
    ];
    const html = renderTimeline(entries);
    expect(html.match(/timeline-entry/g)).toHaveLength(3);
    expect(html.indexOf('data-seq="0"')).toBeLessThan(html.indexOf('data-seq="2"'));
    expect(html).toContain("0h 01m 30s");
    expect(html).toContain("1h 00m 00s");
  });

  it("shows an empty state for no events", () => {
    expect(renderTimeline([])).toContain("No events recorded");
  });
});

describe("describeEntry", () => {
  it("summarizes step, reason, and decider", () => {
    const text = describeEntry(entry(5, "escalation_raised", { step_index: 2, reason: "failed_checks" }));
    expect(text).toBe("step 2 | reason: failed_checks");
    expect(describeEntry(entry(6, "gate_approved", { step_index: 1, decided_by: "x" }))).toContain("by x");
  });
});

describe("formatClock", () => {
  it("formats hours/minutes/seconds", () => {
    expect(formatClock(0)).toBe("0h 00m 00s");
    expect(formatClock(3_661_000)).toBe("1h 01m 01s");
  });
});

describe("banners", () => {
  it("conflict banner names the gate", () => {
    expect(renderConflictBanner("t-9:1")).toContain("already decided");
    expect(renderConflictBanner("t-9:1")).toContain("t-9:1");
  });
});
