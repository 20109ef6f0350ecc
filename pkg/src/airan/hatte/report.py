"""Report serialization.

The canonical JSON is byte-stable across runs: wall-clock numbers are
stripped and written to a `.timing.json` sidecar instead, so two scripted
runs of the same suite diff clean.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

from airan.hatte.aggregate import EvaluationReport


def canonical_json(report: EvaluationReport) -> str:
    record = asdict(report)
    record["mean_latency"] = None  # measured value lives in the timing sidecar
    return json.dumps(record, sort_keys=True, indent=2) + "\n"


def timing_json(report: EvaluationReport, wall_time: float | None = None) -> str:
    record = {"mean_latency": report.mean_latency}
    if wall_time is not None:
        record["wall_time"] = wall_time
    return json.dumps(record, sort_keys=True, indent=2) + "\n"


def render_table(report: EvaluationReport) -> str:
    lines = [
        f"hatte {report.hatte_version}  scenarios={report.scenario_count}  "
        f"turns={report.turn_count}",
        f"overall mean        {report.overall_mean:.4f}",
    ]
    for difficulty, score in report.by_difficulty.items():
        lines.append(f"  {difficulty:<8} mean     {score:.4f}")
    usage = report.tool_usage
    lines += [
        f"tool usage          {usage['single_entity_calls']} single / "
        f"{usage['bulk_calls']} bulk (single fraction {usage['single_fraction']:.4f})",
        f"delegation accuracy {report.delegation_accuracy:.4f}",
        f"redundant steps     {report.redundant_steps}",
        f"hallucination rate  {report.hallucination_rate:.4f}",
        ("mean turn latency   n/a (see timing sidecar)"
         if report.mean_latency is None
         else f"mean turn latency   {report.mean_latency * 1000:.2f} ms"),
    ]
    width = max(len(line) for line in lines)
    rule = "-" * width
    return "\n".join([rule, *lines, rule]) + "\n"


def write_report(report: EvaluationReport, out_path: str | Path,
                 wall_time: float | None = None) -> Path:
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(canonical_json(report))
    sidecar = out_path.with_suffix(out_path.suffix + ".timing.json")
    sidecar.write_text(timing_json(report, wall_time))
    return out_path
