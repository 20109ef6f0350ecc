"""The turn pipeline: classify, plan, execute, synthesize.

Tool errors are recorded on the call and the loop continues; only backend
failures abort the turn, and even then the turn is recorded with its error
so a session survives a flaky backend.
"""

from __future__ import annotations

import time
from dataclasses import asdict

from airan.agents.claims import extract_and_ground
from airan.agents.intents import classify_intent
from airan.agents.planner import build_plan, plan_from_labels
from airan.agents.types import (AgentResponse, ConversationSession, ENGINEER,
                                MAX_STEPS, ToolCall, Turn)
from airan.tools import SIM_CONTROL, ToolRegistry


def run_turn(session: ConversationSession, utterance: str, backend,
             registry: ToolRegistry, scenario_id: str | None = None,
             emit=None) -> Turn:
    """Run one conversational turn.

    `emit(kind, payload)`, when given, receives progress events in issue
    order: intent, plan_step per step, tool_call/tool_result pairs, then
    final_text and metrics (metrics precede the final frame when the
    backend errored). The event stream carries every field of the
    finished turn record.
    """
    started = time.perf_counter()
    turn_index = len(session.turns)

    def _emit(kind: str, payload: dict) -> None:
        if emit is not None:
            emit(kind, payload)

    intent = classify_intent(utterance, session)
    plan = build_plan(intent, session, utterance)

    plan_hook = getattr(backend, "plan_for", None)
    if plan_hook is not None:
        labels = plan_hook(scenario_id, turn_index)
        if labels is not None:
            plan = plan_from_labels(labels, plan.notes)

    _emit("intent", {"utterance": utterance, "intent": asdict(intent)})
    for i, step in enumerate(plan.steps):
        _emit("plan_step", {"index": i, "description": step.description,
                            "tool_family": step.tool_family,
                            "binding": step.binding})

    tool_calls: list[ToolCall] = []
    final_text: str | None = None
    error: str | None = None

    ctx = {"session": session, "utterance": utterance, "intent": intent,
           "plan": plan, "tool_calls": tool_calls, "turn_index": turn_index,
           "scenario_id": scenario_id, "step": 0}

    for step in range(MAX_STEPS):
        ctx["step"] = step
        try:
            decision = backend.decide(ctx)
        except Exception as exc:  # backend failure ends the turn, not the session
            error = f"{type(exc).__name__}: {exc}"
            break
        if decision.final_text is not None:
            final_text = decision.final_text
            break
        request = decision.tool_request
        name = request.get("tool", "")
        params = request.get("params", {})
        if session.persona != ENGINEER and _family(registry, name) == SIM_CONTROL:
            note = "refused sim_control for user persona"
            if note not in plan.notes:
                plan.notes.append(note)
            continue
        call_id = f"c{turn_index}_{len(tool_calls)}"
        _emit("tool_call", {"id": call_id, "tool": name, "params": params,
                            "issued_at_step": step})
        try:
            result = registry.invoke(name, params)
        except Exception as exc:
            result = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        _emit("tool_result", {"id": call_id, "result": result})
        tool_calls.append(ToolCall(id=call_id, tool=name, params=params,
                                   result=result, issued_at_step=step))

    if error is not None:
        response = AgentResponse(text="I hit an internal error handling that.",
                                 claims=[])
    else:
        if final_text is None:
            plan.notes.append("step budget exhausted")
            from airan.agents.synthesizer import synthesize
            final_text = synthesize(intent, plan, tool_calls)
        response = AgentResponse(text=final_text,
                                 claims=extract_and_ground(final_text, tool_calls))

    turn = Turn(utterance=utterance, intent=intent, plan=plan,
                tool_calls=tool_calls, response=response,
                latency=time.perf_counter() - started, error=error)
    session.turns.append(turn)

    metrics = {"latency": turn.latency, "error": error, "notes": plan.notes,
               "steps": len(tool_calls),
               "grounded_claims": sum(1 for c in response.claims
                                      if c.grounding is not None),
               "claims": len(response.claims)}
    final = {"text": response.text,
             "claims": [asdict(c) for c in response.claims],
             "is_error": error is not None}
    if error is not None:
        _emit("metrics", metrics)
        _emit("final_text", final)
    else:
        _emit("final_text", final)
        _emit("metrics", metrics)
    return turn


def _family(registry: ToolRegistry, name: str) -> str | None:
    try:
        return registry.get(name).family
    except KeyError:
        return None


__all__ = ["run_turn"]
