import { esc } from "./evalview.js";
import type { TurnRecord } from "./types.js";

// Transcript rendering for one persona pane. Each turn expands into a
// plan / tool-call inspector; tool calls anchor their raw payloads.

function renderPlan(turn: TurnRecord): string {
  const steps = turn.plan.steps.map(
    (step, i) =>
      `<li class="plan-step" data-family="${esc(step.tool_family)}">` +
      `${i + 1}. ${esc(step.description)}</li>`,
  );
  const notes = turn.plan.notes.length
    ? `<div class="plan-notes">${turn.plan.notes.map(esc).join("; ")}</div>`
    : "";
  return `<ol class="plan">${steps.join("")}</ol>${notes}`;
}

function renderToolCalls(turn: TurnRecord, turnId: string): string {
  const entries = turn.tool_calls.map((call, i) => {
    const anchor = `${turnId}-call-${i}`;
    const failed =
      call.result !== null && (call.result as Record<string, unknown>).error !== undefined;
    return (
      `<li class="tool-call${failed ? " tool-call-failed" : ""}" id="${anchor}">` +
      `<a href="#${anchor}-payload">${esc(call.tool)}</a> ` +
      `<code>${esc(JSON.stringify(call.params))}</code>` +
      `<pre class="tool-payload" id="${anchor}-payload">` +
      `${esc(JSON.stringify(call.result, null, 2))}</pre></li>`
    );
  });
  return `<ol class="tool-calls">${entries.join("")}</ol>`;
}

export function renderTurn(turn: TurnRecord, index: number, sessionId: string): string {
  const turnId = `${sessionId}-t${index}`;
  const badge = turn.error !== null
    ? `<span class="error-badge" title="${esc(turn.error)}">error</span>`
    : "";
  const intent = turn.intent
    ? `<span class="intent-tag">${esc(turn.intent.category)}</span>`
    : "";
  return (
    `<article class="turn${turn.error !== null ? " turn-error" : ""}" id="${turnId}">` +
    `<div class="utterance">${esc(turn.utterance ?? "")}</div>` +
    `<div class="reply">${badge}${esc(turn.response.text ?? "")}</div>` +
    `<details class="turn-inspector"><summary>${intent}` +
    `${turn.plan.steps.length} steps, ${turn.tool_calls.length} calls</summary>` +
    renderPlan(turn) +
    renderToolCalls(turn, turnId) +
    `</details></article>`
  );
}

export function renderTranscript(
  sessionId: string,
  turns: TurnRecord[],
): string {
  const body = turns.map((t, i) => renderTurn(t, i, sessionId)).join("");
  return `<div class="transcript" data-session="${esc(sessionId)}">${body}</div>`;
}

// Two fixed persona panes, engineer and user, side by side.
export function renderChatPanes(panes: {
  engineer: { sessionId: string; turns: TurnRecord[] };
  user: { sessionId: string; turns: TurnRecord[] };
}): string {
  const pane = (
    persona: "engineer" | "user",
    data: { sessionId: string; turns: TurnRecord[] },
  ): string =>
    `<section class="chat-pane" data-persona="${persona}">` +
    `<h2>${persona}</h2>` +
    renderTranscript(data.sessionId, data.turns) +
    `</section>`;
  return (
    `<div class="chat-panes">` +
    pane("engineer", panes.engineer) +
    pane("user", panes.user) +
    `</div>`
  );
}
