"""Scenario execution: one private testbed per scenario, scored turn by turn."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from airan.agents.pipeline import run_turn
from airan.agents.types import ConversationSession, ENGINEER
from airan.hatte.schema import Scenario
from airan.hatte.scoring import LayerScores, score_turn
from airan.tools import build_registry


@dataclass
class EvaluationTrace:
    scenario_id: str
    category: str
    difficulty: str
    session: ConversationSession
    per_turn_layer_scores: list[LayerScores] = field(default_factory=list)
    wall_times: list[float] = field(default_factory=list)

    @property
    def score(self) -> float:
        if not self.per_turn_layer_scores:
            return 0.0
        return sum(s.mean for s in self.per_turn_layer_scores) / len(
            self.per_turn_layer_scores)


def run_scenario(scenario: Scenario, backend) -> EvaluationTrace:
    testbed = scenario.build_testbed()
    registry = build_registry(testbed)
    session = ConversationSession(id=f"eval-{scenario.id}", persona=ENGINEER,
                                  testbed=testbed)
    trace = EvaluationTrace(scenario_id=scenario.id, category=scenario.category,
                            difficulty=scenario.difficulty, session=session)
    for scenario_turn in scenario.turns:
        started = time.perf_counter()
        turn = run_turn(session, scenario_turn.utterance, backend, registry,
                        scenario_id=scenario.id)
        trace.per_turn_layer_scores.append(score_turn(turn, scenario_turn, testbed))
        trace.wall_times.append(time.perf_counter() - started)
    return trace


def run_suite(scenarios: list[Scenario], backend) -> list[EvaluationTrace]:
    return [run_scenario(sc, backend) for sc in scenarios]
