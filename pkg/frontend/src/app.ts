// Console application state and wiring.
//
// The server is the source of truth: decisions update the inbox
// optimistically and a Conflict rolls the card back in via a refresh with
// an "already decided" banner. Hash routes: #/inbox (default) and
// #/task/<id> for the audit timeline.

import { ApiClient, ApiError, ServiceUnreachable } from "./api.js";
import type { DecisionChoice, GateCard } from "./types.js";
import {
  renderConflictBanner,
  renderErrorBanner,
  renderInbox,
  renderPlan,
  renderTaskHeader,
  renderTimeline,
} from "./render.js";

type Tab = "step_gate" | "qa_escalation";

export class ConsoleApp {
  private gates: GateCard[] = [];
  private tab: Tab = "step_gate";
  private banner = "";

  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
    private readonly refreshIntervalMs = 5000,
  ) {}

  start(): void {
    window.addEventListener("hashchange", () => void this.route());
    this.root.addEventListener("click", (event) => void this.onClick(event));
    this.root.addEventListener("change", (event) => this.onRoleChange(event));
    window.setInterval(() => {
      if (!window.location.hash || window.location.hash.startsWith("#/inbox")) {
        void this.refreshInbox();
      }
    }, this.refreshIntervalMs);
    void this.route();
  }

  private async route(): Promise<void> {
    const hash = window.location.hash;
    const taskMatch = /^#\/task\/(.+)$/.exec(hash);
    if (taskMatch) {
      await this.showTimeline(decodeURIComponent(taskMatch[1]));
    } else {
      await this.refreshInbox();
    }
  }

  async refreshInbox(): Promise<void> {
    try {
      this.gates = await this.api.fetchGateInbox();
    } catch (err) {
      this.banner = renderErrorBanner(
        err instanceof ServiceUnreachable ? "Service unreachable; retrying on next refresh." : String(err),
      );
      this.paintInbox();
      return;
    }
    this.paintInbox();
  }

  private paintInbox(): void {
    const stepCount = this.gates.filter((g) => g.kind === "step_gate").length;
    const qaCount = this.gates.filter((g) => g.kind === "qa_escalation").length;
    this.root.innerHTML = `
      <nav class="topbar">
        <h1>gatework expert console</h1>
        <label>role
          <select id="role-switcher">
            <option value="expert"${this.api.expertId === "expert" ? " selected" : ""}>expert</option>
            <option value="qa_expert"${this.api.expertId === "qa_expert" ? " selected" : ""}>qa_expert</option>
          </select>
        </label>
      </nav>
      ${this.banner}
      <div class="tabs">
        <button class="tab${this.tab === "step_gate" ? " active" : ""}" data-tab="step_gate">
          step gates (${stepCount})</button>
        <button class="tab${this.tab === "qa_escalation" ? " active" : ""}" data-tab="qa_escalation">
          QA escalations (${qaCount})</button>
        <button class="tab refresh" data-tab="refresh">refresh</button>
      </div>
      <section id="inbox">${renderInbox(this.gates, this.tab)}</section>`;
    this.banner = "";
  }

  private async showTimeline(taskId: string): Promise<void> {
    try {
      const [view, events] = await Promise.all([this.api.fetchTask(taskId), this.api.fetchFullTimeline(taskId)]);
      this.root.innerHTML = `
        <nav class="topbar"><a href="#/inbox">&larr; inbox</a></nav>
        ${renderTaskHeader(view)}
        ${view.plan ? renderPlan(view.plan.steps, view.plan.revision) : ""}
        ${renderTimeline(events)}`;
    } catch (err) {
      this.root.innerHTML = renderErrorBanner(`Cannot load task ${taskId}: ${String(err)}`);
    }
  }

  private onRoleChange(event: Event): void {
    const target = event.target as HTMLElement;
    if (target instanceof HTMLSelectElement && target.id === "role-switcher") {
      this.api.expertId = target.value;
      void this.refreshInbox();
    }
  }

  private async onClick(event: Event): Promise<void> {
    const target = event.target as HTMLElement;
    if (target.matches("button.tab")) {
      const tab = target.getAttribute("data-tab");
      if (tab === "refresh") {
        await this.refreshInbox();
      } else if (tab === "step_gate" || tab === "qa_escalation") {
        this.tab = tab;
        this.paintInbox();
      }
      return;
    }
    if (target.matches("button.action")) {
      const gateId = target.getAttribute("data-gate") ?? "";
      const action = target.getAttribute("data-action") as DecisionChoice;
      await this.decide(gateId, action);
    }
  }

  async decide(gateId: string, action: DecisionChoice): Promise<void> {
    const notesInput = this.root.querySelector<HTMLInputElement>(`input.notes[data-gate="${gateId}"]`);
    const notes = notesInput?.value.trim() ?? "";
    if (action === "reject_with_notes" && !notes) {
      this.banner = renderErrorBanner("Rejection requires notes.");
      this.paintInbox();
      return;
    }
    let edited = "";
    if (action === "edit_and_approve") {
      edited = window.prompt("Edited step description:")?.trim() ?? "";
      if (!edited) return;
    }

    // optimistic: the card leaves the inbox immediately
    const snapshot = this.gates;
    this.gates = this.gates.filter((g) => g.gate_id !== gateId);
    this.paintInbox();
    try {
      await this.api.submitDecision(gateId, {
        decision: action,
        notes,
        ...(edited ? { edited_description: edited } : {}),
      });
    } catch (err) {
      this.gates = snapshot; // roll back, then reconcile with the server
      if (err instanceof ApiError && err.isConflict) {
        this.banner = renderConflictBanner(gateId);
      } else {
        this.banner = renderErrorBanner(`Decision failed: ${String(err)}`);
      }
      await this.refreshInbox();
      return;
    }
    await this.refreshInbox();
  }
}
