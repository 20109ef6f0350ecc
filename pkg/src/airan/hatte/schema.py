"""Scenario corpus schema and validating loader.

A suite file is either a bare JSON array of scenarios or an object
{"hatte_version", "difficulty_distribution", "scenarios"}. Validation is
all-or-nothing: one bad scenario rejects the whole file, because a silently
shrunken suite would skew every aggregate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from airan.agents.intents import CATEGORIES
from airan.agents.planner import family_of_label
from airan.errors import SchemaError
from airan.testbed import Testbed, default_config

HATTE_VERSION = "1.0"
DIFFICULTIES = ("easy", "medium", "hard")
GROUND_TRUTH_KINDS = ("deterministic", "rubric")
_CATEGORY_SET = frozenset(CATEGORIES)


@dataclass
class GroundTruth:
    kind: str
    path: str = ""
    expected_value: object = None
    tolerance: float = 0.01
    field: str = ""
    reference_answer_text: str = ""


@dataclass
class ScenarioTurn:
    utterance: str
    reference_plans: list[list[str]]
    reference_tool_calls: list[dict]  # {"tool", "required_params"}
    ground_truth: GroundTruth


@dataclass
class Scenario:
    id: str
    category: str
    difficulty: str
    sim_config: dict  # {"config": name-or-dict, "seed", "warmup_ticks"}
    turns: list[ScenarioTurn] = field(default_factory=list)

    def build_testbed(self) -> Testbed:
        conf = self.sim_config.get("config", "desk_base")
        if isinstance(conf, str):
            config = default_config()
        else:
            from airan.sim.config import SimConfig
            config = SimConfig.from_dict(conf)
        tb = Testbed(config, seed=self.sim_config.get("seed"))
        warmup = int(self.sim_config.get("warmup_ticks", 0))
        if warmup:
            tb.tick(warmup)
        return tb


def _require(condition: bool, scenario_id: str, fieldpath: str, message: str) -> None:
    if not condition:
        raise SchemaError(scenario_id, fieldpath, message)


def _parse_ground_truth(raw: dict, sid: str, fieldpath: str) -> GroundTruth:
    _require(isinstance(raw, dict), sid, fieldpath, "ground_truth must be an object")
    kind = raw.get("kind")
    _require(kind in GROUND_TRUTH_KINDS, sid, f"{fieldpath}.kind",
             f"must be one of {GROUND_TRUTH_KINDS}, got {kind!r}")
    if kind == "deterministic":
        _require(bool(raw.get("path")), sid, f"{fieldpath}.path", "required")
        _require(bool(raw.get("field")), sid, f"{fieldpath}.field", "required")
        _require("expected_value" in raw, sid, f"{fieldpath}.expected_value", "required")
        tolerance = float(raw.get("tolerance", 0.01))
        _require(tolerance >= 0, sid, f"{fieldpath}.tolerance", "must be >= 0")
        return GroundTruth(kind=kind, path=raw["path"], field=raw["field"],
                           expected_value=raw["expected_value"], tolerance=tolerance)
    _require(bool(raw.get("reference_answer_text")), sid,
             f"{fieldpath}.reference_answer_text", "required")
    return GroundTruth(kind=kind, reference_answer_text=raw["reference_answer_text"])


def _parse_turn(raw: dict, sid: str, index: int) -> ScenarioTurn:
    base = f"turns[{index}]"
    _require(isinstance(raw.get("utterance"), str) and raw["utterance"].strip() != "",
             sid, f"{base}.utterance", "must be a nonempty string")
    plans = raw.get("reference_plans")
    _require(isinstance(plans, list) and len(plans) >= 1, sid,
             f"{base}.reference_plans", "at least one reference plan required")
    for p, plan in enumerate(plans):
        _require(isinstance(plan, list) and plan, sid,
                 f"{base}.reference_plans[{p}]", "must be a nonempty label list")
        for label in plan:
            try:
                family_of_label(label)
            except (ValueError, AttributeError):
                raise SchemaError(sid, f"{base}.reference_plans[{p}]",
                                  f"unparseable step label {label!r}") from None
    calls = raw.get("reference_tool_calls", [])
    _require(isinstance(calls, list), sid, f"{base}.reference_tool_calls",
             "must be a list")
    for c, call in enumerate(calls):
        _require(isinstance(call, dict) and "tool" in call
                 and isinstance(call.get("required_params"), dict),
                 sid, f"{base}.reference_tool_calls[{c}]",
                 "needs tool and required_params")
    gt = _parse_ground_truth(raw.get("ground_truth"), sid, f"{base}.ground_truth")
    return ScenarioTurn(utterance=raw["utterance"], reference_plans=plans,
                        reference_tool_calls=calls, ground_truth=gt)


def _parse_scenario(raw: dict, position: int) -> Scenario:
    sid = raw.get("id") or f"<scenario #{position}>"
    _require(bool(raw.get("id")), sid, "id", "required")
    _require(raw.get("category") in _CATEGORY_SET, sid, "category",
             f"unknown category {raw.get('category')!r}")
    _require(raw.get("difficulty") in DIFFICULTIES, sid, "difficulty",
             f"must be one of {DIFFICULTIES}")
    _require(isinstance(raw.get("sim_config"), dict), sid, "sim_config",
             "must be an object")
    turns_raw = raw.get("turns")
    _require(isinstance(turns_raw, list), sid, "turns", "must be a list")
    _require(2 <= len(turns_raw) <= 3, sid, "turns",
             f"must have 2..3 turns, got {len(turns_raw)}")
    turns = [_parse_turn(t, sid, i) for i, t in enumerate(turns_raw)]
    return Scenario(id=raw["id"], category=raw["category"],
                    difficulty=raw["difficulty"], sim_config=raw["sim_config"],
                    turns=turns)


def _check_ground_truth_resolvable(scenario: Scenario) -> None:
    """Deterministic expectations must match the freshly warmed world."""
    det = [(i, t.ground_truth) for i, t in enumerate(scenario.turns)
           if t.ground_truth.kind == "deterministic"]
    if not det:
        return
    tb = scenario.build_testbed()
    for index, gt in det:
        base = f"turns[{index}].ground_truth"
        try:
            payload = tb.query(gt.path).payload
        except Exception as exc:
            raise SchemaError(scenario.id, f"{base}.path",
                              f"query failed: {exc}") from None
        _require(gt.field in payload, scenario.id, f"{base}.field",
                 f"field {gt.field!r} not in payload for {gt.path!r}")
        live = payload[gt.field]
        expected = gt.expected_value
        if isinstance(expected, (int, float)) and not isinstance(expected, bool):
            _require(isinstance(live, (int, float)), scenario.id,
                     f"{base}.expected_value", f"live value {live!r} is not numeric")
            bound = gt.tolerance * max(abs(live), abs(expected)) if expected else 0.0
            _require(abs(live - expected) <= bound, scenario.id,
                     f"{base}.expected_value",
                     f"live value {live!r} outside tolerance of {expected!r}")
        else:
            _require(live == expected, scenario.id, f"{base}.expected_value",
                     f"live value {live!r} != {expected!r}")


def load_scenarios(path: str | Path, resolve: bool = True) -> list[Scenario]:
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        raw_list = data.get("scenarios")
        if not isinstance(raw_list, list):
            raise SchemaError("<file>", "scenarios", "missing scenario array")
    elif isinstance(data, list):
        raw_list = data
    else:
        raise SchemaError("<file>", "", "suite must be an array or object")

    scenarios = [_parse_scenario(raw, i) for i, raw in enumerate(raw_list)]
    seen: set[str] = set()
    for sc in scenarios:
        _require(sc.id not in seen, sc.id, "id", "duplicate scenario id")
        seen.add(sc.id)
    if resolve:
        for sc in scenarios:
            _check_ground_truth_resolvable(sc)
    return scenarios


def suite_header(path: str | Path) -> dict:
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        return {k: v for k, v in data.items() if k != "scenarios"}
    return {"hatte_version": HATTE_VERSION}
