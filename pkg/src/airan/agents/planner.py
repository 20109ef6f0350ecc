"""Template plans per intent category.

Step descriptions are canonical labels ("get ue/7/status", "list cell/_all",
"tick 5", "respond") so plan comparison can work on (family, label) pairs.
The user persona never receives sim_control steps; the refusal is noted on
the plan instead.
"""

from __future__ import annotations

import re

from airan.agents.types import ConversationSession, ENGINEER, Intent, Plan, PlanStep
from airan.tools import (DEPLOY_PIPELINE, KNOWLEDGE_GET, KNOWLEDGE_LIST, RESPOND,
                         SIM_CONTROL)

MAX_FANOUT = 4  # cap per-entity expansion so plans stay within the step budget


def _get(path: str, **params) -> PlanStep:
    call_params = {"path": path, **params}
    return PlanStep(description=f"get {path}", tool_family=KNOWLEDGE_GET,
                    binding={"tool": "knowledge.get", "params": call_params})


def _list(path: str) -> PlanStep:
    return PlanStep(description=f"list {path}", tool_family=KNOWLEDGE_LIST,
                    binding={"tool": "knowledge.list", "params": {"path": path}})


def _tick(n: int) -> PlanStep:
    return PlanStep(description=f"tick {n}", tool_family=SIM_CONTROL,
                    binding={"tool": "sim.tick", "params": {"n": n}})


def _profile(modality: str, **extra) -> PlanStep:
    return PlanStep(description=f"profile {modality}", tool_family=DEPLOY_PIPELINE,
                    binding={"tool": "deploy.profile",
                             "params": {"modality": modality, **extra}})


def _place(service_id: str) -> PlanStep:
    return PlanStep(description=f"place {service_id}", tool_family=DEPLOY_PIPELINE,
                    binding={"tool": "deploy.place", "params": {"service_id": service_id}})


def _subscribe(service_id: str, subscriber: str) -> PlanStep:
    return PlanStep(description=f"subscribe {service_id}", tool_family=DEPLOY_PIPELINE,
                    binding={"tool": "deploy.subscribe",
                             "params": {"service_id": service_id, "subscriber": subscriber}})


def _unsubscribe(service_id: str, subscriber: str) -> PlanStep:
    return PlanStep(description=f"unsubscribe {service_id}", tool_family=DEPLOY_PIPELINE,
                    binding={"tool": "deploy.unsubscribe",
                             "params": {"service_id": service_id, "subscriber": subscriber}})


def _respond() -> PlanStep:
    return PlanStep(description="respond", tool_family=RESPOND, binding=None)


_LABEL_FAMILIES = {
    "get": KNOWLEDGE_GET, "list": KNOWLEDGE_LIST, "tick": SIM_CONTROL,
    "profile": DEPLOY_PIPELINE, "place": DEPLOY_PIPELINE,
    "subscribe": DEPLOY_PIPELINE, "unsubscribe": DEPLOY_PIPELINE,
    "respond": RESPOND,
}


def family_of_label(label: str) -> str:
    verb = label.split(" ", 1)[0]
    family = _LABEL_FAMILIES.get(verb)
    if family is None:
        raise ValueError(f"unknown plan label verb {verb!r}")
    return family


def plan_from_labels(labels: list[str], notes: list[str] | None = None) -> Plan:
    """Rebuild a Plan from canonical step labels, without tool bindings."""
    steps = [PlanStep(description=label, tool_family=family_of_label(label))
             for label in labels]
    return Plan(steps=steps, notes=list(notes or []))


def _first(intent: Intent, kind: str):
    for ent in intent.entities:
        if ent["kind"] == kind:
            return ent["id"]
    return None


def _all_of(intent: Intent, kind: str) -> list:
    return [e["id"] for e in intent.entities if e["kind"] == kind]


def _tick_count(utterance: str) -> int:
    m = re.search(r"\b(\d+)\s*(?:ticks?|seconds?|steps?)\b", utterance.lower())
    if m:
        return max(1, min(1000, int(m.group(1))))
    return 5


def _modality(utterance: str) -> str:
    text = utterance.lower()
    if any(w in text for w in ("vision", "video", "camera", "image", "detect")):
        return "vision"
    if any(w in text for w in ("nlp", "language", "chat", "text", "summar")):
        return "nlp"
    if any(w in text for w in ("predict", "forecast", "anticipat")):
        return "predictive"
    return "vision"


def build_plan(intent: Intent, session: ConversationSession,
               utterance: str = "") -> Plan:
    testbed = session.testbed
    category = intent.category
    ue = _first(intent, "ue")
    cell = _first(intent, "cell")
    bs = _first(intent, "bs")
    service = _first(intent, "service")
    slice_id = _first(intent, "slice")
    server = _first(intent, "edge_server")
    steps: list[PlanStep] = []
    notes: list[str] = []

    def cells_in_world() -> list[int]:
        return sorted(testbed.world.cells)[:MAX_FANOUT]

    def servers_in_world() -> list[str]:
        return sorted(testbed.edge.servers)[:MAX_FANOUT]

    if category in ("ue_status_monitoring", "ue_signal_quality", "ue_throughput_check",
                    "ue_allocation_review"):
        steps = [_get(f"ue/{ue}/status")] if ue is not None else [_list("ue/_all")]
    elif category in ("ue_history_review", "ue_handover_history"):
        steps = [_get(f"ue/{ue}/history", window="10")] if ue is not None else [_list("ue/_all")]
    elif category in ("ue_mobility_tracking", "ue_connection_diagnosis"):
        if ue is not None:
            steps = [_get(f"ue/{ue}/status"), _get(f"ue/{ue}/history", window="10")]
        else:
            steps = [_list("ue/_all")]
    elif category == "cell_load_monitoring":
        steps = [_get(f"cell/{cell}/load")] if cell is not None else [_list("cell/_all")]
    elif category in ("cell_kpi_report", "interference_analysis",
                      "energy_efficiency_review"):
        steps = [_get(f"cell/{cell}/kpi")] if cell is not None else [_list("cell/_all")]
    elif category in ("congestion_analysis", "throughput_analysis", "capacity_planning",
                      "traffic_demand_analysis"):
        if cell is not None:
            steps = [_get(f"cell/{cell}/load"), _get(f"cell/{cell}/kpi")]
        else:
            steps = [_list("cell/_all")]
    elif category == "coverage_analysis":
        if cell is not None:
            steps = [_get(f"cell/{cell}/kpi"), _list("ue/_all")]
        else:
            steps = [_list("cell/_all"), _list("ue/_all")]
    elif category == "handover_analysis":
        if cell is not None:
            steps = [_list("ue/_all"), _get(f"cell/{cell}/kpi")]
        else:
            steps = [_list("ue/_all"), _list("cell/_all")]
    elif category == "cell_comparison":
        pair = _all_of(intent, "cell")[:2]
        if len(pair) == 2:
            steps = [_get(f"cell/{pair[0]}/kpi"), _get(f"cell/{pair[1]}/kpi")]
        else:
            steps = [_list("cell/_all")]
    elif category == "load_balancing_review":
        steps = [_list("cell/_all")] + [_get(f"cell/{c}/load") for c in cells_in_world()]
    elif category in ("network_overview", "topology_inventory", "anomaly_detection",
                      "network_health_check"):
        steps = [_list("cell/_all"), _list("ue/_all")]
    elif category in ("bs_summary_report", "backhaul_analysis"):
        target = bs if bs is not None else sorted(testbed.world.base_stations)[0]
        steps = [_get(f"bs/{target}/summary")]
    elif category in ("slice_membership_review", "slice_performance",
                      "qos_compliance_check"):
        if slice_id is not None:
            steps = [_get(f"slice/{slice_id}/members")]
        else:
            first = sorted(testbed.world.slices)[0]
            steps = [_get(f"slice/{first}/members")]
        if category == "qos_compliance_check":
            steps.append(_list("ue/_all"))
    elif category in ("fault_diagnosis", "root_cause_analysis"):
        if cell is not None:
            steps = [_get(f"cell/{cell}/kpi"), _get(f"cell/{cell}/load"), _list("ue/_all")]
        elif ue is not None:
            steps = [_get(f"ue/{ue}/status"), _get(f"ue/{ue}/history", window="10")]
        else:
            steps = [_list("cell/_all"), _list("ue/_all")]
    elif category == "fault_prediction":
        target = [_get(f"cell/{cell}/kpi")] if cell is not None else [_list("cell/_all")]
        steps = target + [_profile("predictive")]
    elif category == "alarm_triage":
        steps = [_get("ric/xapps"), _get("ric/subscriptions")]
    elif category in ("xapp_inventory", "xapp_lifecycle_management"):
        steps = [_get("ric/xapps")]
    elif category == "ric_subscription_audit":
        steps = [_get("ric/subscriptions")]
    elif category == "control_action_review":
        steps = [_get("ric/xapps"), _get("ric/subscriptions")]
    elif category in ("ai_services_management", "service_catalog_browse"):
        steps = [_list("ai_service/_all")]
    elif category == "service_recommendation":
        steps = [_profile(_modality(utterance))]
    elif category == "service_deployment":
        if service is not None:
            steps = [_place(service), _subscribe(service, session.id)]
        else:
            steps = [_profile(_modality(utterance))]
    elif category == "service_placement_query":
        steps = [_place(service)] if service is not None else [_list("ai_service/_all")]
    elif category == "service_status_check":
        if service is not None:
            steps = [_get(f"ai_service/{service}/status")]
        else:
            steps = [_list("ai_service/_all")]
    elif category == "service_subscription":
        steps = [_subscribe(service, session.id)] if service is not None \
            else [_list("ai_service/_all")]
    elif category == "service_unsubscription":
        steps = [_unsubscribe(service, session.id)] if service is not None \
            else [_get("ric/subscriptions")]
    elif category == "edge_utilization_review":
        targets = [server] if server is not None else servers_in_world()
        steps = [_get(f"edge_server/{s}/utilization") for s in targets]
    elif category == "edge_capacity_planning":
        steps = ([_get(f"edge_server/{s}/utilization") for s in servers_in_world()]
                 + [_list("ai_service/_all")])
    elif category == "sim_advance":
        if session.persona == ENGINEER:
            steps = [_tick(_tick_count(utterance))]
        else:
            notes.append("delegation refused: sim_control requires the engineer persona")
    elif category == "historical_trend_analysis":
        if ue is not None:
            steps = [_get(f"ue/{ue}/history", window="10")]
        elif cell is not None:
            steps = [_get(f"cell/{cell}/kpi"), _get(f"cell/{cell}/load")]
        else:
            steps = [_list("ue/_all")]
    elif category == "general_query":
        steps = []
    else:  # closed set; unreachable unless the table grows without a template
        notes.append(f"no template for category {category}")
        steps = []

    steps.append(_respond())
    return Plan(steps=steps, notes=notes)
