"""Calibration harnesses and scripted-agent derivations.

The injection harness measures the hallucination detector against a known
taint schedule. The half-planner script is derived from a suite's reference
plans: it declares and executes only the first reference step per turn,
the canonical degraded agent for calibration.
"""

from __future__ import annotations

import json
from pathlib import Path

from airan.agents.backends import HeuristicBackend, InjectionBackend, ReplayBackend
from airan.agents.pipeline import run_turn
from airan.agents.types import ConversationSession, ENGINEER
from airan.hatte.schema import Scenario
from airan.hatte.scoring import detect_hallucination
from airan.testbed import Testbed, default_config
from airan.tools import build_registry

HALF_PLANNER_TEXT = "Partial check complete; tell me if you want the full drill-down."


def run_injection_calibration(rate: float, turns: int = 100,
                              seed: int = 3) -> float:
    """Drive grounded status turns through an injecting backend and return
    the measured hallucination rate. With the deterministic schedule the
    result is exactly floor(turns*rate)/turns."""
    testbed = Testbed(default_config(), seed=seed)
    testbed.tick(5)
    registry = build_registry(testbed)
    session = ConversationSession(id="calib", persona=ENGINEER, testbed=testbed)
    backend = InjectionBackend(HeuristicBackend(), rate)
    ue_ids = sorted(testbed.world.ues)
    flagged = 0
    for i in range(turns):
        ue = ue_ids[i % len(ue_ids)]
        turn = run_turn(session, f"What's the status of UE {ue}?", backend, registry)
        flagged += 1 if detect_hallucination(turn) else 0
    return flagged / turns


def half_planner_script(scenarios: list[Scenario]) -> dict:
    """Replay script that plans and executes only the first reference step."""
    decisions: dict = {}
    plans: dict = {}
    for scenario in scenarios:
        for ti, turn in enumerate(scenario.turns):
            first_plan = turn.reference_plans[0]
            plans[(scenario.id, ti)] = [first_plan[0]]
            step = 0
            if turn.reference_tool_calls:
                ref = turn.reference_tool_calls[0]
                decisions[(scenario.id, ti, step)] = {
                    "tool": ref["tool"], "params": dict(ref["required_params"])}
                step += 1
            decisions[(scenario.id, ti, step)] = {"final_text": HALF_PLANNER_TEXT}
    return {"decisions": decisions, "plans": plans}


def load_script(path: str | Path) -> ReplayBackend:
    with open(path) as fh:
        return ReplayBackend(json.load(fh))
