"""Regenerate the shipped 50-scenario suite and its perfect replay script.

Edits the suite in a self-validating loop: after generation it loads the
suite through the schema validator, replays the perfect script (expecting
all-ones), runs the heuristic baseline (expecting easy >= medium >= hard),
and derives the half-planner to confirm the 2/3 planning calibration.
Run from the repo root: python3 scripts/generate_suite.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from airan.agents.backends import HeuristicBackend, ReplayBackend
from airan.agents.pipeline import run_turn
from airan.agents.synthesizer import synthesize
from airan.agents.types import ConversationSession, ENGINEER, ToolCall
from airan.hatte.harness import half_planner_script
from airan.hatte.runner import run_suite
from airan.hatte.schema import load_scenarios
from airan.testbed import Testbed, default_config
from airan.tools import build_registry

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "airan" / "data"
WARMUP = 10
BASE_SEED = 1000

# (category, [turn utterances], deterministic ground truth for turn 0 or None)
EASY = [
    ("ue_status_monitoring",
     ["What's the status of UE 3?", "And the status of UE 5?"],
     ("ue/3/status", "rsrp_dbm")),
    ("ue_signal_quality",
     ["How's the signal quality for UE 2?", "How's the signal quality for UE 9?"],
     ("ue/2/status", "rsrp_dbm")),
    ("cell_load_monitoring",
     ["What's the load on cell 2?", "What's the load on cell 1?"],
     ("cell/2/load", "load")),
    ("cell_kpi_report",
     ["Give me the KPIs for cell 1", "Now the KPIs for cell 3"],
     ("cell/1/kpi", "mean_rsrp_dbm")),
    ("ue_history_review",
     ["Show the history for UE 1", "Show the history for UE 4"],
     ("ue/1/history", "count")),
    ("interference_analysis",
     ["Is there interference on cell 1?", "Check interference on cell 2 as well"],
     ("cell/1/kpi", "mean_sinr_db")),
    ("energy_efficiency_review",
     ["What's the tx power and energy picture for cell 2?",
      "Same energy review for cell 3"],
     ("cell/2/kpi", "tx_power_dbm")),
    ("xapp_inventory",
     ["Which xApps are running?", "Which xApps does the RIC have installed?"],
     ("ric/xapps", "count")),
    ("ric_subscription_audit",
     ["Audit subscriptions on the RIC", "Audit subscriptions once more"],
     ("ric/subscriptions", "count")),
    ("service_catalog_browse",
     ["What services are in the catalog?", "Browse the catalog for me"],
     ("ai_service/_all", "count")),
    ("bs_summary_report",
     ["Summary of base station 1 please", "Summary of base station 2 please"],
     ("bs/1/summary", "mean_load")),
    ("slice_membership_review",
     ["Which UEs are in slice embb?", "Which UEs are in slice urllc?"],
     ("slice/embb/members", "count")),
    ("network_overview",
     ["Give me a network overview", "How many cells and UEs are in the topology?"],
     ("ue/_all", "count")),
    ("topology_inventory",
     ["How many cells and UEs are in the topology?", "Give me a network overview"],
     ("cell/_all", "count")),
    ("service_status_check",
     ["Is nlp-chat up and running?", "Is the vision-detect service running?"],
     None),
    ("service_placement_query",
     ["Where would vision-segment be placed?", "Where would nlp-summarize be placed?"],
     None),
    ("service_subscription",
     ["Subscribe me to predict-traffic", "Subscribe me to nlp-chat"],
     None),
    ("service_unsubscription",
     ["Subscribe me to predict-energy", "Unsubscribe me from predict-energy"],
     None),
    ("sim_advance",
     ["Advance the sim 5 ticks", "What's the status of UE 0?"],
     None),
    ("edge_utilization_review",
     ["What's the edge utilization on edge-1?", "What's the edge utilization on edge-2?"],
     ("edge_server/edge-1/utilization", "max_utilization")),
]


def _serving(captured, path):
    return captured["payloads"][path]["serving_cell"]


def _sv(testbed, ue):
    return testbed.query(f"ue/{ue}/status").payload["serving_cell"]


# (category, [utterances], extra_fn(ti, captured) -> [(label, tool, params)])
MEDIUM = [
    ("ue_mobility_tracking",
     ["Where is UE 5 right now?", "Where is UE 8?"],
     lambda ti, cap: _cell_load_extra(_serving(cap, f"ue/{5 if ti == 0 else 8}/status"))),
    ("ue_allocation_review",
     ["How many PRBs are allocated to UE 2?", "How many PRBs are allocated to UE 7?"],
     lambda ti, cap: _cell_load_extra(_serving(cap, f"ue/{2 if ti == 0 else 7}/status"))),
    ("ue_throughput_check",
     ["Is UE 3 getting enough throughput?", "Is UE 6 getting enough throughput?"],
     lambda ti, cap: _cell_kpi_extra(_serving(cap, f"ue/{3 if ti == 0 else 6}/status"))),
    ("congestion_analysis",
     ["Is cell 3 congested?", "Is cell 1 congested?"],
     lambda ti, cap: _list_ue_extra()),
    ("throughput_analysis",
     ["What's the throughput situation on cell 2?", "And cell 3 throughput?"],
     lambda ti, cap: _list_ue_extra()),
    ("coverage_analysis",
     ["How's the coverage around cell 3?", "Coverage check for cell 2"],
     lambda ti, cap: _cell_kpi_extra(1 if ti == 0 else 3)),
    ("cell_comparison",
     ["Compare cell 1 and cell 2", "Compare cell 2 and cell 3"],
     lambda ti, cap: _cell_load_extra(1 if ti == 0 else 2)),
    ("load_balancing_review",
     ["Is the load balanced across cells?", "Do we need to rebalance anything?"],
     lambda ti, cap: [("get ric/xapps", "knowledge.get", {"path": "ric/xapps"})]),
    ("backhaul_analysis",
     ["Any issues on the backhaul for BS 1?", "Backhaul check for BS 2"],
     lambda ti, cap: _cell_load_extra(1 if ti == 0 else 2)),
    ("slice_performance",
     ["How is the urllc slice performing?", "How is the embb slice performing?"],
     lambda ti, cap: _member_status_extra(
         cap["payloads"][f"slice/{'urllc' if ti == 0 else 'embb'}/members"]["members"])),
    ("network_health_check",
     ["Quick health check, any problems?", "Run the health check again, everything ok?"],
     lambda ti, cap: [("get ric/subscriptions", "knowledge.get",
                       {"path": "ric/subscriptions"})]),
    ("alarm_triage",
     ["Show me current alarms and alerts", "Any new alerts?"],
     lambda ti, cap: [("list cell/_all", "knowledge.list", {"path": "cell/_all"})]),
    ("control_action_review",
     ["What control actions were issued this session?",
      "Review the control actions around the load balancer"],
     lambda ti, cap: [("list cell/_all", "knowledge.list", {"path": "cell/_all"})]),
    ("ai_services_management",
     ["Give me a deployments overview of the AI services",
      "Manage ai services: what's deployed where?"],
     lambda ti, cap: [("get ai_service/vision-detect/status", "knowledge.get",
                       {"path": "ai_service/vision-detect/status"})]),
    ("service_recommendation",
     ["Recommend a vision service for camera analytics",
      "Recommend a service to forecast traffic patterns"],
     lambda ti, cap: _top_rec_status_extra(cap)),
    ("service_deployment",
     ["Deploy vision-detect for me", "Deploy nlp-chat too"],
     lambda ti, cap: [("get ai_service/" + ("vision-detect" if ti == 0 else "nlp-chat")
                       + "/status", "knowledge.get",
                       {"path": "ai_service/" + ("vision-detect" if ti == 0 else "nlp-chat")
                        + "/status"})]),
    ("traffic_demand_analysis",
     ["What's the traffic demand around cell 1?", "Traffic demand on cell 2?"],
     lambda ti, cap: _list_ue_extra()),
]


def _cell_load_extra(cell_id):
    return [(f"get cell/{cell_id}/load", "knowledge.get", {"path": f"cell/{cell_id}/load"})]


def _cell_kpi_extra(cell_id):
    return [(f"get cell/{cell_id}/kpi", "knowledge.get", {"path": f"cell/{cell_id}/kpi"})]


def _list_ue_extra():
    return [("list ue/_all", "knowledge.list", {"path": "ue/_all"})]


def _member_status_extra(members):
    if not members:
        return _list_ue_extra()
    m = members[0]
    return [(f"get ue/{m}/status", "knowledge.get", {"path": f"ue/{m}/status"})]


def _top_rec_status_extra(cap):
    for payload in cap["results"]:
        if "recommendations" in payload and payload["recommendations"]:
            top = payload["recommendations"][0]["service_id"]
            return [(f"get ai_service/{top}/status", "knowledge.get",
                     {"path": f"ai_service/{top}/status"})]
    return [("list ai_service/_all", "knowledge.list", {"path": "ai_service/_all"})]


def _reads(*paths):
    out = []
    for p in paths:
        tool = "knowledge.list" if p.endswith("/_all") else "knowledge.get"
        verb = "list" if p.endswith("/_all") else "get"
        out.append((f"{verb} {p}", tool, {"path": p}))
    return out


# (category, [utterances], hard_fn(ti, captured, session_id, testbed))
HARD = [
    ("ue_connection_diagnosis",
     ["UE 6 keeps dropping its connection", "Which cell would suit UE 6 better?"],
     lambda ti, cap, sid, tb: (
         _reads("ue/6/status", "ue/6/history", f"cell/{_sv(tb, 6)}/kpi",
                f"cell/{_sv(tb, 6)}/load", "cell/_all")
         if ti == 0 else
         _reads("ue/6/status", "cell/_all", "cell/1/kpi", "cell/2/kpi", "cell/3/kpi"))),
    ("ue_handover_history",
     ["How many times has UE 4 switched cells?", "Show the full mobility picture for UE 4"],
     lambda ti, cap, sid, tb: (
         _reads("ue/4/history", "ue/4/status", "cell/_all") if ti == 0 else
         _reads("ue/4/status", "ue/4/history", f"cell/{_sv(tb, 4)}/kpi"))),
    ("handover_analysis",
     ["Is there ping-pong between cell 1 and cell 2?",
      "What would reduce the handover churn?"],
     lambda ti, cap, sid, tb: (
         _reads("cell/1/kpi", "cell/2/kpi", "ue/_all", "ric/xapps") if ti == 0 else
         _reads("ric/xapps", "ric/subscriptions"))),
    ("capacity_planning",
     ["Does cell 2 have headroom or will it run out of capacity?",
      "Project the capacity picture across the whole network"],
     lambda ti, cap, sid, tb: (
         _reads("cell/2/load", "cell/2/kpi", "ue/_all", "cell/_all") if ti == 0 else
         _reads("cell/_all", "cell/1/load", "cell/2/load", "cell/3/load"))),
    ("fault_diagnosis",
     ["Why is sector 3 dropping packets?", "Anything else failing nearby?",
      "Summarize what the RIC is doing about it"],
     lambda ti, cap, sid, tb: (
         _reads("cell/3/kpi", "cell/3/load", "ue/_all") if ti == 0 else
         _reads("cell/1/kpi", "cell/2/kpi", "ue/_all") if ti == 1 else
         _reads("ric/xapps", "ric/subscriptions"))),
    ("fault_prediction",
     ["Which cells are at risk? predict faults for cell 2",
      "Should we bring up the fault predictor service?"],
     lambda ti, cap, sid, tb: (
         (_reads("cell/2/kpi", "cell/2/load")
          + [("profile predictive", "deploy.profile", {"modality": "predictive"})]
          + _reads("ai_service/_all")) if ti == 0 else
         (_reads("ai_service/_all")
          + [("place predict-fault", "deploy.place", {"service_id": "predict-fault"}),
             ("subscribe predict-fault", "deploy.subscribe",
              {"service_id": "predict-fault", "subscriber": sid})]))),
    ("anomaly_detection",
     ["Any anomalies in the network?", "Dig into the strangest looking cell"],
     lambda ti, cap, sid, tb: (
         _reads("cell/_all", "ue/_all", "cell/1/kpi", "cell/2/kpi", "cell/3/kpi")
         if ti == 0 else
         _reads("cell/1/kpi", "cell/1/load", "ue/_all"))),
    ("root_cause_analysis",
     ["What's the root cause of the issues on cell 1?",
      "And the underlying cause for UE 2's drops?"],
     lambda ti, cap, sid, tb: (
         (_reads("cell/1/kpi", "cell/1/load")
          + _first_attached_reads(tb, "cell/1/kpi") + _reads("ric/xapps"))
         if ti == 0 else
         _reads("ue/2/status", "ue/2/history", f"cell/{_sv(tb, 2)}/kpi",
                f"cell/{_sv(tb, 2)}/load"))),
    ("xapp_lifecycle_management",
     ["Restart xapp monitor please", "What state is each xApp in now?"],
     lambda ti, cap, sid, tb: (
         _reads("ric/xapps", "ric/subscriptions", "ai_service/_all") if ti == 0 else
         _reads("ric/xapps", "ric/subscriptions"))),
    ("edge_capacity_planning",
     ["Can the edge take more load?", "Which server suits vision-segment best?"],
     lambda ti, cap, sid, tb: (
         (_reads("edge_server/edge-1/utilization", "edge_server/edge-2/utilization",
                 "edge_server/edge-3/utilization", "ai_service/_all")
          + [("place vision-detect", "deploy.place", {"service_id": "vision-detect"})])
         if ti == 0 else
         ([("place vision-segment", "deploy.place", {"service_id": "vision-segment"})]
          + _reads("edge_server/edge-1/utilization")))),
    ("qos_compliance_check",
     ["Are we meeting QoS targets on slice urllc?", "Full QoS audit across both slices please"],
     lambda ti, cap, sid, tb: (
         (_reads("slice/urllc/members", "ue/_all")
          + _member_reads(tb, "slice/urllc/members")) if ti == 0 else
         (_reads("slice/embb/members", "slice/urllc/members")
          + _member_reads(tb, "slice/embb/members")))),
    ("historical_trend_analysis",
     ["Show the trend for UE 2 over time", "Is the whole network trending worse?"],
     lambda ti, cap, sid, tb: (
         _reads("ue/2/history", "ue/2/status", f"cell/{_sv(tb, 2)}/kpi") if ti == 0 else
         _reads("cell/_all", "cell/1/kpi", "cell/2/kpi", "cell/3/kpi"))),
    ("general_query",
     ["What should I look at first?", "hello again"],
     lambda ti, cap, sid, tb: (
         _reads("cell/_all", "ue/_all") if ti == 0 else [])),
]


def _first_attached_reads(testbed, kpi_path):
    attached = testbed.query(kpi_path).payload.get("attached_ue_ids") or [0]
    u = attached[0]
    return _reads(f"ue/{u}/status", f"ue/{u}/history")


def _member_reads(testbed, members_path):
    members = testbed.query(members_path).payload.get("members") or [0]
    out = []
    for m in members[:2]:
        out += _reads(f"ue/{m}/status")
    return out


def _capture_turn(session, registry, utterance, sid):
    turn = run_turn(session, utterance, HeuristicBackend(), registry, scenario_id=sid)
    if turn.error is not None:
        raise RuntimeError(f"{sid}: turn errored: {turn.error}")
    payloads = {}
    results = []
    for call in turn.tool_calls:
        if call.is_error:
            raise RuntimeError(f"{sid}: call {call.tool} {call.params} errored: "
                               f"{call.result}")
        body = call.result.get("payload", call.result)
        results.append(body)
        if "path" in call.result:
            payloads[call.result["path"]] = body
    return {
        "turn": turn,
        "labels": [s.description for s in turn.plan.steps],
        "calls": [(c.tool, dict(c.params)) for c in turn.tool_calls],
        "text": turn.response.text,
        "payloads": payloads,
        "results": results,
    }


def _invoke_all(registry, specs):
    """Execute (label, tool, params) triples, returning labels, call dicts,
    and ToolCall shims for the synthesizer."""
    labels, calls, shims = [], [], []
    for i, (label, tool, params) in enumerate(specs):
        result = registry.invoke(tool, dict(params))
        labels.append(label)
        calls.append({"tool": tool, "required_params": dict(params)})
        shims.append(ToolCall(id=f"ref{i}", tool=tool, params=dict(params),
                              result=result, issued_at_step=i))
    return labels, calls, shims


def _turn_entry(utterance, ref_plans, ref_calls, gt):
    return {"utterance": utterance, "reference_plans": ref_plans,
            "reference_tool_calls": ref_calls, "ground_truth": gt}


def _det_gt(testbed, path, fieldname):
    payload = testbed.query(path).payload
    return {"kind": "deterministic", "path": path, "field": fieldname,
            "expected_value": payload[fieldname], "tolerance": 0.01}


def _rubric_gt(text):
    return {"kind": "rubric", "reference_answer_text": text}


def generate():
    scenarios = []
    perfect_decisions = {}
    perfect_plans = {}
    index = 0

    def new_context(sid, seed):
        testbed = Testbed(default_config(), seed=seed)
        testbed.tick(WARMUP)
        registry = build_registry(testbed)
        session = ConversationSession(id=f"eval-{sid}", persona=ENGINEER,
                                      testbed=testbed)
        return testbed, registry, session

    def emit(sid, ti, ref_plan, ref_calls, final_text):
        perfect_plans[f"{sid}:{ti}"] = list(ref_plan)
        for k, call in enumerate(ref_calls):
            perfect_decisions[f"{sid}:{ti}:{k}"] = {
                "tool": call["tool"], "params": dict(call["required_params"])}
        perfect_decisions[f"{sid}:{ti}:{len(ref_calls)}"] = {"final_text": final_text}

    for category, utterances, det in EASY:
        sid = f"sc-{category}"
        seed = BASE_SEED + index
        index += 1
        testbed, registry, session = new_context(sid, seed)
        turns = []
        for ti, utterance in enumerate(utterances):
            cap = _capture_turn(session, registry, utterance, sid)
            ref_calls = [{"tool": t, "required_params": p} for t, p in cap["calls"]]
            if ti == 0 and det is not None:
                gt = _det_gt(testbed, det[0], det[1]) if not _mutates(cap) else \
                    _rubric_gt(cap["text"])
            else:
                gt = _rubric_gt(cap["text"])
            turns.append(_turn_entry(utterance, [cap["labels"]], ref_calls, gt))
            emit(sid, ti, cap["labels"], ref_calls, cap["text"])
        scenarios.append({"id": sid, "category": category, "difficulty": "easy",
                          "sim_config": {"config": "desk_base", "seed": seed,
                                         "warmup_ticks": WARMUP},
                          "turns": turns})

    for category, utterances, extra_fn in MEDIUM:
        sid = f"sc-{category}"
        seed = BASE_SEED + index
        index += 1
        testbed, registry, session = new_context(sid, seed)
        turns = []
        for ti, utterance in enumerate(utterances):
            cap = _capture_turn(session, registry, utterance, sid)
            extra_specs = extra_fn(ti, cap)
            extra_labels, extra_calls, extra_shims = _invoke_all(registry, extra_specs)
            ref_labels = cap["labels"][:-1] + extra_labels + ["respond"]
            ref_calls = ([{"tool": t, "required_params": p} for t, p in cap["calls"]]
                         + extra_calls)
            ref_answer = synthesize(cap["turn"].intent, cap["turn"].plan,
                                    cap["turn"].tool_calls + extra_shims)
            turns.append(_turn_entry(utterance, [ref_labels], ref_calls,
                                     _rubric_gt(ref_answer)))
            emit(sid, ti, ref_labels, ref_calls, ref_answer)
        scenarios.append({"id": sid, "category": category, "difficulty": "medium",
                          "sim_config": {"config": "desk_base", "seed": seed,
                                         "warmup_ticks": WARMUP},
                          "turns": turns})

    for category, utterances, hard_fn in HARD:
        sid = f"sc-{category}"
        seed = BASE_SEED + index
        index += 1
        testbed, registry, session = new_context(sid, seed)
        turns = []
        for ti, utterance in enumerate(utterances):
            cap = _capture_turn(session, registry, utterance, sid)
            specs = hard_fn(ti, cap, session.id, testbed)
            if specs:
                ref_labels, ref_calls, shims = _invoke_all(registry, specs)
                ref_labels = ref_labels + ["respond"]
                ref_answer = synthesize(cap["turn"].intent, cap["turn"].plan, shims)
            else:
                ref_labels, ref_calls = ["respond"], []
                ref_answer = cap["text"]
            turns.append(_turn_entry(utterance, [ref_labels], ref_calls,
                                     _rubric_gt(ref_answer)))
            emit(sid, ti, ref_labels, ref_calls, ref_answer)
        scenarios.append({"id": sid, "category": category, "difficulty": "hard",
                          "sim_config": {"config": "desk_base", "seed": seed,
                                         "warmup_ticks": WARMUP},
                          "turns": turns})

    distribution = {"easy": len(EASY), "medium": len(MEDIUM), "hard": len(HARD)}
    suite = {"hatte_version": "1.0", "difficulty_distribution": distribution,
             "scenarios": scenarios}
    script = {"decisions": perfect_decisions, "plans": perfect_plans}
    return suite, script


def _mutates(cap):
    return any(t in ("sim.tick", "deploy.subscribe", "deploy.unsubscribe")
               for t, _ in cap["calls"])


def validate(suite_path, script_path):
    scenarios = load_scenarios(suite_path)
    assert len(scenarios) == 50, len(scenarios)
    assert len({s.category for s in scenarios}) == 50

    with open(script_path) as fh:
        perfect = ReplayBackend(json.load(fh))
    traces = run_suite(scenarios, perfect)
    bad = []
    for trace in traces:
        for ti, layer in enumerate(trace.per_turn_layer_scores):
            if not (layer.planning == layer.tool_use == layer.e2e == 1.0):
                bad.append((trace.scenario_id, ti, layer.planning, layer.tool_use,
                            layer.e2e))
    if bad:
        for row in bad[:20]:
            print("PERFECT MISS:", row)
        raise SystemExit(1)

    heuristic_traces = run_suite(scenarios, HeuristicBackend())
    by_diff = {}
    for t in heuristic_traces:
        by_diff.setdefault(t.difficulty, []).append(t.score)
    means = {d: sum(v) / len(v) for d, v in by_diff.items()}
    print("heuristic means:", {d: round(m, 4) for d, m in sorted(means.items())})
    assert means["easy"] >= means["medium"] >= means["hard"], means

    half = ReplayBackend(half_planner_script(scenarios))
    half_traces = run_suite(scenarios, half)
    two_step = 0
    for scenario, trace in zip(scenarios, half_traces):
        for st, layer in zip(scenario.turns, trace.per_turn_layer_scores):
            if len(st.reference_plans[0]) == 2:
                two_step += 1
                assert abs(layer.planning - 2.0 / 3.0) < 1e-9, (
                    scenario.id, layer.planning)
    print(f"half-planner calibration turns: {two_step}")
    half_mean = sum(t.score for t in half_traces) / len(half_traces)
    perfect_mean = sum(t.score for t in traces) / len(traces)
    assert half_mean < perfect_mean, (half_mean, perfect_mean)
    print(f"perfect mean {perfect_mean:.4f}, half mean {half_mean:.4f}")


def main():
    suite, script = generate()
    suite_path = DATA_DIR / "suite_50.json"
    script_path = DATA_DIR / "perfect_script.json"
    suite_path.write_text(json.dumps(suite, indent=1, sort_keys=True) + "\n")
    script_path.write_text(json.dumps(script, indent=1, sort_keys=True) + "\n")
    print(f"wrote {suite_path} and {script_path}")
    validate(suite_path, script_path)


if __name__ == "__main__":
    main()
