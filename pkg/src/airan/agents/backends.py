"""Decision backends for the agent loop.

Each backend sees the same context dict (session, utterance, intent, plan,
tool_calls so far, step, turn_index, scenario_id) and returns one
BackendDecision per call: either the next tool request or the final text.
"""

from __future__ import annotations

import json
import math
import os
import time
import urllib.error
import urllib.request

from airan.agents.synthesizer import synthesize
from airan.agents.types import BackendDecision

INJECTED_SENTENCE = "Projected spare capacity is 7391.5 PRBs."


class HeuristicBackend:
    """Walk the plan's tool bindings in order, then synthesize the answer."""

    name = "heuristic"

    def decide(self, ctx: dict) -> BackendDecision:
        bindings = [s.binding for s in ctx["plan"].steps if s.binding]
        done = len(ctx["tool_calls"])
        if done < len(bindings):
            return BackendDecision(tool_request=dict(bindings[done]))
        text = synthesize(ctx["intent"], ctx["plan"], ctx["tool_calls"])
        return BackendDecision(final_text=text)


class ReplayBackend:
    """Scripted decisions keyed by (scenario_id, turn_index, step_index).

    A script entry is either {"tool": ..., "params": {...}} or
    {"final_text": ...}; {"final_text": null} means defer to the
    synthesizer over whatever calls have run so far.

    The structured form {"decisions": {...}, "plans": {...}} additionally
    carries plan-label overrides keyed by (scenario_id, turn_index), so a
    replay can assert the decomposition it is executing. A flat dict is
    treated as decisions only.
    """

    name = "replay"

    def __init__(self, script: dict):
        decisions = script.get("decisions", script) if isinstance(script, dict) else script
        plans = script.get("plans", {}) if isinstance(script, dict) else {}
        self._script = {self._decision_key(k): v for k, v in decisions.items()}
        self._plans = {self._plan_key(k): v for k, v in plans.items()}

    @staticmethod
    def _decision_key(key):
        if isinstance(key, str):
            scenario, turn, step = key.rsplit(":", 2)
            return (scenario, int(turn), int(step))
        return key

    @staticmethod
    def _plan_key(key):
        if isinstance(key, str):
            scenario, turn = key.rsplit(":", 1)
            return (scenario, int(turn))
        return key

    def plan_for(self, scenario_id, turn_index) -> list | None:
        return self._plans.get((scenario_id, turn_index))

    def decide(self, ctx: dict) -> BackendDecision:
        key = (ctx.get("scenario_id"), ctx["turn_index"], ctx["step"])
        entry = self._script.get(key)
        if entry is None:
            return BackendDecision(
                final_text="I have no scripted action for this request.")
        if "tool" in entry:
            return BackendDecision(tool_request={"tool": entry["tool"],
                                                 "params": dict(entry.get("params", {}))})
        text = entry.get("final_text")
        if text is None:
            text = synthesize(ctx["intent"], ctx["plan"], ctx["tool_calls"])
        return BackendDecision(final_text=text)


class RemoteBackend:
    """Chat-completions style HTTP backend with two retries."""

    name = "remote"

    def __init__(self, url: str | None = None, api_key: str | None = None,
                 model: str = "default", timeout: float = 30.0):
        self.url = url or os.environ.get("AIRAN_BACKEND_URL")
        if not self.url:
            raise ValueError("remote backend needs a URL (AIRAN_BACKEND_URL)")
        self.api_key = api_key or os.environ.get("AIRAN_BACKEND_KEY", "")
        self.model = model
        self.timeout = timeout

    def _messages(self, ctx: dict) -> list[dict]:
        tools = [s.binding for s in ctx["plan"].steps if s.binding]
        history = [{"tool": c.tool, "params": c.params, "result": c.result}
                   for c in ctx["tool_calls"]]
        system = ("You control a RAN testbed. Reply with a JSON object: either "
                  '{"tool": name, "params": {...}} to call a tool, or '
                  '{"final_text": "..."} to answer. Planned tool bindings: '
                  + json.dumps(tools))
        return [
            {"role": "system", "content": system},
            {"role": "user", "content": ctx["utterance"]},
            {"role": "user", "content": "Tool results so far: " + json.dumps(history)},
        ]

    def decide(self, ctx: dict) -> BackendDecision:
        body = json.dumps({"model": self.model,
                           "messages": self._messages(ctx)}).encode()
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        last_error: Exception | None = None
        for attempt in range(3):
            if attempt:
                time.sleep(0.5 * 2 ** (attempt - 1))
            try:
                req = urllib.request.Request(self.url, data=body, headers=headers)
                with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                    reply = json.loads(resp.read().decode())
                content = reply["choices"][0]["message"]["content"]
                return self._parse(content)
            except (urllib.error.URLError, KeyError, IndexError,
                    json.JSONDecodeError, TimeoutError) as exc:
                last_error = exc
        raise RuntimeError(f"remote backend unavailable: {last_error}")

    @staticmethod
    def _parse(content: str) -> BackendDecision:
        try:
            obj = json.loads(content)
        except json.JSONDecodeError:
            return BackendDecision(final_text=content)
        if isinstance(obj, dict) and "tool" in obj:
            return BackendDecision(tool_request={"tool": obj["tool"],
                                                 "params": obj.get("params", {})})
        if isinstance(obj, dict) and "final_text" in obj:
            return BackendDecision(final_text=str(obj["final_text"]))
        return BackendDecision(final_text=content)


class InjectionBackend:
    """Wrap a backend and append an ungrounded sentence to a deterministic
    subset of turns: turn i (1-based) is tainted iff floor(i*rate) increased.

    The schedule spreads injections evenly for any rate in [0, 1], and the
    tainted-turn count over n turns is exactly floor(n*rate).
    """

    def __init__(self, inner, rate: float):
        if not 0.0 <= rate <= 1.0:
            raise ValueError("injection rate must be in [0, 1]")
        self.inner = inner
        self.rate = rate
        self.name = f"inject({getattr(inner, 'name', 'backend')}, {rate})"

    def should_inject(self, turn_index: int) -> bool:
        i = turn_index + 1
        return math.floor(i * self.rate) > math.floor((i - 1) * self.rate)

    def plan_for(self, scenario_id, turn_index):
        hook = getattr(self.inner, "plan_for", None)
        return hook(scenario_id, turn_index) if hook is not None else None

    def decide(self, ctx: dict) -> BackendDecision:
        decision = self.inner.decide(ctx)
        if decision.final_text is not None and self.should_inject(ctx["turn_index"]):
            return BackendDecision(
                final_text=decision.final_text + " " + INJECTED_SENTENCE)
        return decision
