// Wire protocol types for the gatework service API.

export interface Envelope<T> {
  request_id: string;
  payload?: T;
  error?: { code: string; message: string };
}

export type GateKind = "step_gate" | "qa_escalation";

export interface GateCard {
  gate_id: string;
  task_id: string;
  kind: GateKind;
  step_index: number | null;
  description: string;
  risk: string;
  requested_at: number;
  task_summary: string;
  version: number;
  attachments: string[];
}

export interface AuditEntry {
  seq: number;
  wall_time: number;
  actor: string;
  kind: string;
  payload: Record<string, unknown>;
}

export interface EventsPage {
  events: AuditEntry[];
  next_seq: number;
  total: number;
}

export interface TaskState {
  phase: string;
  version: number;
  pending_gates: number[];
  qa_escalated: boolean;
  [key: string]: unknown;
}

export interface TaskView {
  task_id: string;
  state: TaskState;
  status: string;
  plan: { steps: PlanStep[]; revision: number } | null;
  brief: { brief_text: string; category: string; area: string };
  recent_events: AuditEntry[];
}

export interface PlanStep {
  index: number;
  description: string;
  risk: string;
  gated: boolean;
  status: string;
}

export type DecisionChoice = "approve" | "reject_with_notes" | "edit_and_approve";

export interface DecisionRequest {
  decision: DecisionChoice;
  notes: string;
  edited_description?: string;
  expected_version?: number;
}

export interface DecisionResult {
  task_id: string;
  state: TaskState;
  status: string;
}
