"""Report aggregation over completed evaluation traces."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from airan.errors import EmptyInput
from airan.hatte.runner import EvaluationTrace
from airan.hatte.schema import HATTE_VERSION

FORMULAS = {
    "planning": "max over reference plans of set F1 on (tool_family, step label) pairs",
    "tool_use": "covered reference calls / reference call count; a call counts when "
                "the name and required params match, the result is non-error, and "
                "knowledge reads agree with an independent router query at the same "
                "state version",
    "e2e": "deterministic: 1 if any grounded claim matches the expected value within "
           "tolerance, else 0; rubric: token-set F1 against the reference answer "
           "after lowercasing and stopword removal (continuous)",
    "scenario": "mean over turns of mean(planning, tool_use, e2e); overall is the "
                "mean over scenarios",
}


@dataclass
class EvaluationReport:
    overall_mean: float
    by_difficulty: dict
    by_category: dict
    per_scenario: dict
    tool_usage: dict
    delegation_accuracy: float
    redundant_steps: int
    hallucination_rate: float
    mean_latency: float
    turn_count: int
    scenario_count: int
    hatte_version: str = HATTE_VERSION
    formulas: dict = field(default_factory=lambda: dict(FORMULAS))


def _mean(values) -> float:
    values = list(values)
    return sum(values) / len(values) if values else 0.0


def aggregate(traces: list[EvaluationTrace]) -> EvaluationReport:
    if not traces:
        raise EmptyInput("no traces to aggregate")

    per_scenario: dict = {}
    by_difficulty: dict[str, list[float]] = {}
    by_category: dict[str, list[float]] = {}
    single_calls = 0
    bulk_calls = 0
    delegation_matched = 0
    delegation_total = 0
    redundant = 0
    flagged_turns = 0
    turn_count = 0
    latencies: list[float] = []

    for trace in traces:
        score = trace.score
        per_scenario[trace.scenario_id] = {
            "score": score,
            "difficulty": trace.difficulty,
            "category": trace.category,
            "turns": [s.to_record() for s in trace.per_turn_layer_scores],
        }
        by_difficulty.setdefault(trace.difficulty, []).append(score)
        by_category.setdefault(trace.category, []).append(score)

        seen_calls: set[str] = set()
        for turn in trace.session.turns:
            latencies.append(turn.latency)
            for call in turn.tool_calls:
                if call.tool == "knowledge.get":
                    single_calls += 1
                elif call.tool == "knowledge.list":
                    bulk_calls += 1
                key = call.tool + json.dumps(call.params, sort_keys=True)
                if key in seen_calls:
                    redundant += 1
                else:
                    seen_calls.add(key)
        for layer in trace.per_turn_layer_scores:
            turn_count += 1
            flagged_turns += 1 if layer.hallucinated else 0
            delegation_matched += layer.delegation_matched
            delegation_total += layer.delegation_total

    knowledge_calls = single_calls + bulk_calls
    return EvaluationReport(
        overall_mean=_mean(t.score for t in traces),
        by_difficulty={k: _mean(v) for k, v in sorted(by_difficulty.items())},
        by_category={k: _mean(v) for k, v in sorted(by_category.items())},
        per_scenario=per_scenario,
        tool_usage={
            "single_entity_calls": single_calls,
            "bulk_calls": bulk_calls,
            "single_fraction": (single_calls / knowledge_calls
                                if knowledge_calls else 0.0),
        },
        delegation_accuracy=(delegation_matched / delegation_total
                             if delegation_total else 0.0),
        redundant_steps=redundant,
        hallucination_rate=flagged_turns / turn_count if turn_count else 0.0,
        mean_latency=_mean(latencies),
        turn_count=turn_count,
        scenario_count=len(traces),
    )
