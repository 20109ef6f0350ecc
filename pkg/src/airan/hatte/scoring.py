"""The three scoring layers plus the hallucination detector.

Planning is a set-F1 over (tool_family, step label) pairs, maximized over
the reference plans so any technically valid path earns full credit.
Tool use is the fraction of reference calls covered by a correct agent
call, where knowledge reads are re-verified against the router. End-to-end
is either a ground-truth value check over grounded claims or a token-set
F1 against a reference answer.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from airan.agents.planner import family_of_label
from airan.agents.types import ToolCall, Turn
from airan.hatte.schema import GroundTruth, ScenarioTurn

STOPWORDS = frozenset("""
a an and are as at be been being by can could did do does for from had has
have he here how i in is it its me my now of on or please she should show
than that the then there these they this those to was we were what when
where which who will with would you your
""".split())

_TOKEN_RE = re.compile(r"[a-z0-9._-]+")


@dataclass
class LayerScores:
    planning: float
    tool_use: float
    e2e: float
    hallucinated: bool
    delegation_matched: int
    delegation_total: int

    @property
    def mean(self) -> float:
        return (self.planning + self.tool_use + self.e2e) / 3.0

    def to_record(self) -> dict:
        return {"planning": self.planning, "tool_use": self.tool_use,
                "e2e": self.e2e, "hallucinated": self.hallucinated}


def _normalize_label(label: str) -> str:
    return " ".join(label.lower().split())


def _plan_pairs(labels) -> set[tuple[str, str]]:
    pairs = set()
    for label in labels:
        norm = _normalize_label(label)
        pairs.add((family_of_label(norm), norm))
    return pairs


def set_f1(a: set, b: set) -> float:
    if not a and not b:
        return 1.0
    if not a or not b:
        return 0.0
    overlap = len(a & b)
    return 2.0 * overlap / (len(a) + len(b))


def score_planning(turn: Turn, reference_plans: list[list[str]]) -> float:
    agent = {( s.tool_family, _normalize_label(s.description)) for s in turn.plan.steps}
    if not reference_plans:
        return 1.0 if not agent else 0.0
    return max(set_f1(agent, _plan_pairs(ref)) for ref in reference_plans)


def _params_match(call: ToolCall, required: dict) -> bool:
    return all(k in call.params and call.params[k] == v for k, v in required.items())


def _read_verified(call: ToolCall, testbed) -> bool:
    """Knowledge reads must agree with an independent router query taken at
    the same state version. If the world has moved on since the call, the
    recorded non-error result is accepted as-is."""
    if call.tool not in ("knowledge.get", "knowledge.list"):
        return True
    recorded_version = call.result.get("state_version")
    if testbed is None or recorded_version != testbed.world.state_version:
        return True
    params = {k: str(v) for k, v in call.params.items() if k != "path"}
    try:
        fresh = testbed.query(call.params["path"], params, use_cache=False)
    except Exception:
        return False
    return fresh.payload == call.result.get("payload")


def score_tool_use(turn: Turn, reference_calls: list[dict], testbed=None) -> float:
    if not reference_calls:
        return 1.0
    correct = [c for c in turn.tool_calls
               if not c.is_error and _read_verified(c, testbed)]
    covered = 0
    used: set[int] = set()
    for ref in reference_calls:
        for i, call in enumerate(correct):
            if i in used:
                continue
            if call.tool == ref["tool"] and _params_match(call, ref["required_params"]):
                covered += 1
                used.add(i)
                break
    return min(1.0, covered / len(reference_calls))


def tokenize(text: str) -> set[str]:
    return {t for t in _TOKEN_RE.findall(text.lower()) if t not in STOPWORDS}


def rubric_f1(response_text: str, reference_text: str) -> float:
    return set_f1(tokenize(response_text), tokenize(reference_text))


def _grounded_claims(turn: Turn):
    return [c for c in turn.response.claims if c.grounding is not None]


def score_e2e(turn: Turn, ground_truth: GroundTruth) -> float:
    if ground_truth.kind == "rubric":
        return rubric_f1(turn.response.text, ground_truth.reference_answer_text)
    expected = ground_truth.expected_value
    tol = ground_truth.tolerance
    for claim in _grounded_claims(turn):
        value = claim.value["id"] if isinstance(claim.value, dict) else claim.value
        if isinstance(expected, (int, float)) and not isinstance(expected, bool):
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                continue
            if expected == 0:
                if value == 0:
                    return 1.0
            elif abs(value - expected) <= tol * abs(expected):
                return 1.0
        elif value == expected:
            return 1.0
    return 0.0


def detect_hallucination(turn: Turn) -> bool:
    return any(c.grounding is None for c in turn.response.claims)


def delegation_counts(turn: Turn, reference_plans: list[list[str]]) -> tuple[int, int]:
    """Positional family agreement with the best-matching reference plan."""
    if not turn.plan.steps:
        return (0, 0)
    if not reference_plans:
        return (len(turn.plan.steps), len(turn.plan.steps))
    best = max(reference_plans,
               key=lambda ref: set_f1({(s.tool_family, _normalize_label(s.description))
                                       for s in turn.plan.steps}, _plan_pairs(ref)))
    ref_families = [family_of_label(_normalize_label(l)) for l in best]
    matched = sum(1 for i, step in enumerate(turn.plan.steps)
                  if i < len(ref_families) and step.tool_family == ref_families[i])
    return (matched, len(turn.plan.steps))


def score_turn(turn: Turn, scenario_turn: ScenarioTurn, testbed=None) -> LayerScores:
    matched, total = delegation_counts(turn, scenario_turn.reference_plans)
    if turn.error is not None:
        return LayerScores(planning=0.0, tool_use=0.0, e2e=0.0, hallucinated=False,
                           delegation_matched=0, delegation_total=total)
    return LayerScores(
        planning=score_planning(turn, scenario_turn.reference_plans),
        tool_use=score_tool_use(turn, scenario_turn.reference_tool_calls, testbed),
        e2e=score_e2e(turn, scenario_turn.ground_truth),
        hallucinated=detect_hallucination(turn),
        delegation_matched=matched,
        delegation_total=total,
    )
