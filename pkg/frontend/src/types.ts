// Wire types for the airan gateway. These mirror the JSON the server
// actually sends; the dashboard never computes scores or state itself.

export type EventKind =
  | "intent"
  | "plan_step"
  | "tool_call"
  | "tool_result"
  | "final_text"
  | "metrics";

export interface Frame {
  seq: number;
  kind: EventKind;
  payload: Record<string, unknown>;
}

export interface IntentRecord {
  category: string;
  entities: unknown[];
  confidence: number;
}

export interface PlanStepRecord {
  description: string;
  tool_family: string;
  binding: { tool: string; params: Record<string, unknown> } | null;
}

export interface ToolCallRecord {
  id: string;
  tool: string;
  params: Record<string, unknown>;
  result: Record<string, unknown> | null;
  issued_at_step: number;
}

export interface ClaimRecord {
  span: string;
  value: unknown;
  grounding: string | null;
}

// The persisted shape of one conversational turn, identical to what the
// gateway appends to the session's JSONL trace.
export interface TurnRecord {
  utterance: string | null;
  intent: IntentRecord | null;
  plan: { steps: PlanStepRecord[]; notes: string[] };
  tool_calls: ToolCallRecord[];
  response: { text: string | null; claims: ClaimRecord[] };
  latency: number | null;
  error: string | null;
}

export interface SessionMeta {
  id: string;
  persona: string;
  created_at: string;
  world: string;
}

export interface Health {
  status: string;
  tick: number;
  state_version: number;
}

export interface StateResponse {
  path: string;
  payload: Record<string, unknown>;
  state_version: number;
  from_cache: boolean;
}

export interface EvalJob {
  id: string;
  suite: string;
  backend: string;
  status: "queued" | "running" | "done" | "failed";
  error: string | null;
  report_path: string;
}

export interface ToolUsage {
  single_entity_calls: number;
  bulk_calls: number;
  single_fraction: number;
}

export interface ScenarioResult {
  score: number;
  difficulty: string;
  category: string;
  turns: number;
}

export interface EvaluationReport {
  overall_mean: number;
  by_difficulty: Record<string, number>;
  by_category: Record<string, number>;
  per_scenario: Record<string, ScenarioResult>;
  tool_usage: ToolUsage;
  delegation_accuracy: number;
  redundant_steps: number;
  hallucination_rate: number;
  mean_latency: number | null;
  turn_count: number;
  scenario_count: number;
  hatte_version: string;
  formulas: Record<string, string>;
}

export interface GatewayErrorBody {
  error: { type: string; message: string };
}
