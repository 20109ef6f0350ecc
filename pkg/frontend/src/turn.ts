import type { Frame, ToolCallRecord, TurnRecord } from "./types.js";

// Rebuild the persisted turn record from its streamed frames. This must
// stay field-for-field compatible with what the gateway writes to the
// session trace; the tests hold it against real persisted turns.
//
// Reconstruction is insensitive to the final_text/metrics order because
// error turns stream metrics first.
export function turnFromEvents(frames: Frame[]): TurnRecord {
  const record: TurnRecord = {
    utterance: null,
    intent: null,
    plan: { steps: [], notes: [] },
    tool_calls: [],
    response: { text: null, claims: [] },
    latency: null,
    error: null,
  };
  const calls = new Map<string, ToolCallRecord>();

  for (const frame of frames) {
    const p = frame.payload as Record<string, any>;
    switch (frame.kind) {
      case "intent":
        record.utterance = p.utterance;
        record.intent = p.intent;
        break;
      case "plan_step":
        record.plan.steps.push({
          description: p.description,
          tool_family: p.tool_family,
          binding: p.binding,
        });
        break;
      case "tool_call": {
        const call: ToolCallRecord = {
          id: p.id,
          tool: p.tool,
          params: p.params,
          result: null,
          issued_at_step: p.issued_at_step,
        };
        calls.set(call.id, call);
        record.tool_calls.push(call);
        break;
      }
      case "tool_result": {
        const call = calls.get(p.id);
        if (call === undefined) {
          throw new Error(`tool_result for unknown call ${p.id}`);
        }
        call.result = p.result;
        break;
      }
      case "final_text":
        record.response.text = p.text;
        record.response.claims = p.claims;
        break;
      case "metrics":
        // Plan notes live here, not on plan_step frames: the pipeline can
        // append notes after the plan was already streamed.
        record.latency = p.latency;
        record.error = p.error;
        record.plan.notes = p.notes;
        break;
    }
  }
  return record;
}

export function isComplete(frames: Frame[]): boolean {
  let sawFinal = false;
  let sawMetrics = false;
  for (const frame of frames) {
    if (frame.kind === "final_text") sawFinal = true;
    if (frame.kind === "metrics") sawMetrics = true;
  }
  return sawFinal && sawMetrics;
}
