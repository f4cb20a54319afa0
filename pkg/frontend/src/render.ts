// Pure HTML-string renderers: no fetches, no DOM reads, fully unit-testable.

import type { AuditEntry, GateCard, PlanStep, TaskView } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function formatClock(wallTimeMs: number): string {
  const totalSeconds = Math.floor(wallTimeMs / 1000);
  const h = Math.floor(totalSeconds / 3600);
  const m = Math.floor((totalSeconds % 3600) / 60);
  const s = totalSeconds % 60;
  return `${h}h ${String(m).padStart(2, "0")}m ${String(s).padStart(2, "0")}s`;
}

export function riskBadge(risk: string): string {
  const cls = risk === "high" ? "badge risk-high" : risk === "medium" ? "badge risk-medium" : "badge risk-low";
  return `<span class="${cls}">${escapeHtml(risk || "low")}</span>`;
}

export function renderGateCard(gate: GateCard): string {
  const kindLabel = gate.kind === "qa_escalation" ? "offline QA escalation" : `step ${gate.step_index} gate`;
  const attachments = gate.attachments.length
    ? `<ul class="attachments">${gate.attachments
        .map((name) => `<li>${escapeHtml(name)}</li>`)
        .join("")}</ul>`
    : `<p class="muted">no attachments yet</p>`;
  const editControl =
    gate.kind === "step_gate"
      ? `<button class="action edit" data-action="edit_and_approve" data-gate="${escapeHtml(gate.gate_id)}">edit &amp; approve</button>`
      : "";
  return `
  <article class="gate-card" data-gate-id="${escapeHtml(gate.gate_id)}" data-kind="${gate.kind}">
    <header>
      <span class="gate-kind">${escapeHtml(kindLabel)}</span>
      ${riskBadge(gate.risk)}
      <a class="task-link" href="#/task/${encodeURIComponent(gate.task_id)}">${escapeHtml(gate.task_id)}</a>
    </header>
    <p class="summary">${escapeHtml(gate.task_summary)}</p>
    <p class="description">${escapeHtml(gate.description)}</p>
    ${attachments}
    <div class="decision-row">
      <button class="action approve" data-action="approve" data-gate="${escapeHtml(gate.gate_id)}">approve</button>
      <button class="action reject" data-action="reject_with_notes" data-gate="${escapeHtml(gate.gate_id)}">reject</button>
      ${editControl}
      <input class="notes" data-gate="${escapeHtml(gate.gate_id)}" placeholder="notes (required to reject)" />
    </div>
  </article>`;
}

export function renderInbox(gates: GateCard[], kind: "step_gate" | "qa_escalation"): string {
  const mine = gates.filter((g) => g.kind === kind);
  if (mine.length === 0) {
    const what = kind === "step_gate" ? "step gates" : "QA escalations";
    return `<div class="empty-state">No pending ${what}. New requests appear here on refresh.</div>`;
  }
  return mine.map(renderGateCard).join("\n");
}

export function renderPlan(steps: PlanStep[], revision: number): string {
  const rows = steps
    .map(
      (s) => `
      <tr class="status-${escapeHtml(s.status)}">
        <td>${s.index}</td>
        <td>${escapeHtml(s.description)}</td>
        <td>${riskBadge(s.risk)}${s.gated ? ' <span class="badge gated">gated</span>' : ""}</td>
        <td>${escapeHtml(s.status)}</td>
      </tr>`,
    )
    .join("");
  return `
  <table class="plan">
    <caption>plan (revision ${revision})</caption>
    <thead><tr><th>#</th><th>step</th><th>risk</th><th>status</th></tr></thead>
    <tbody>${rows}</tbody>
  </table>`;
}

export function renderTimelineEntry(entry: AuditEntry, firstWallTime: number): string {
  const elapsed = formatClock(entry.wall_time - firstWallTime);
  const detail = describeEntry(entry);
  return `
  <li class="timeline-entry actor-${escapeHtml(entry.actor)}" data-seq="${entry.seq}">
    <span class="seq">#${entry.seq}</span>
    <span class="elapsed">${elapsed}</span>
    <span class="actor">${escapeHtml(entry.actor)}</span>
    <span class="kind">${escapeHtml(entry.kind)}</span>
    ${detail ? `<span class="detail">${escapeHtml(detail)}</span>` : ""}
  </li>`;
}

export function describeEntry(entry: AuditEntry): string {
  const p = entry.payload ?? {};
  const step = p["step_index"];
  const parts: string[] = [];
  if (step !== undefined && step !== null) parts.push(`step ${step}`);
  if (typeof p["reason"] === "string") parts.push(`reason: ${p["reason"]}`);
  if (typeof p["notes"] === "string" && p["notes"]) parts.push(`notes: ${p["notes"]}`);
  if (typeof p["worker_id"] === "string") parts.push(String(p["worker_id"]));
  if (typeof p["decided_by"] === "string") parts.push(`by ${p["decided_by"]}`);
  return parts.join(" | ");
}

export function renderTimeline(entries: AuditEntry[]): string {
  if (entries.length === 0) {
    return `<div class="empty-state">No events recorded.</div>`;
  }
  const first = entries[0].wall_time;
  const items = entries.map((e) => renderTimelineEntry(e, first)).join("\n");
  return `<ol class="timeline">${items}</ol>`;
}

export function renderTaskHeader(view: TaskView): string {
  return `
  <header class="task-header">
    <h2>${escapeHtml(view.task_id)}</h2>
    <span class="badge phase">${escapeHtml(view.state.phase)}</span>
    <span class="muted">${escapeHtml(view.brief.area)} / ${escapeHtml(view.brief.category)} · v${view.state.version}</span>
    <p>${escapeHtml(view.brief.brief_text)}</p>
  </header>`;
}

export function renderConflictBanner(gateId: string): string {
  return `<div class="banner conflict" role="alert">Gate ${escapeHtml(gateId)} was already decided elsewhere. Inbox refreshed.</div>`;
}

export function renderErrorBanner(message: string): string {
  return `<div class="banner error" role="alert">${escapeHtml(message)}</div>`;
}
