from airan.hatte.aggregate import EvaluationReport, FORMULAS, aggregate
from airan.hatte.harness import (half_planner_script, load_script,
                                 run_injection_calibration)
from airan.hatte.report import canonical_json, render_table, write_report
from airan.hatte.runner import EvaluationTrace, run_scenario, run_suite
from airan.hatte.schema import (DIFFICULTIES, GroundTruth, HATTE_VERSION,
                                Scenario, ScenarioTurn, load_scenarios,
                                suite_header)
from airan.hatte.scoring import (LayerScores, detect_hallucination, rubric_f1,
                                 score_e2e, score_planning, score_tool_use,
                                 score_turn, set_f1, tokenize)

__all__ = [
    "DIFFICULTIES", "EvaluationReport", "EvaluationTrace", "FORMULAS",
    "GroundTruth", "HATTE_VERSION", "LayerScores", "Scenario", "ScenarioTurn",
    "aggregate", "canonical_json", "detect_hallucination", "half_planner_script",
    "load_scenarios", "load_script", "render_table", "rubric_f1",
    "run_injection_calibration", "run_scenario", "run_suite", "score_e2e",
    "score_planning", "score_tool_use", "score_turn", "set_f1", "suite_header",
    "tokenize", "write_report",
]
