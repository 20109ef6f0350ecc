"""Keyword intent classification over the 50 operational categories.

Scoring is a weighted phrase match plus a small bonus when an extracted
entity kind fits the category; ties break by table order, and anything
scoring below threshold falls back to general_query. Entirely deterministic
so the scripted agent is replayable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from airan.errors import EmptyUtterance
from airan.agents.types import ConversationSession, Intent

SCORE_THRESHOLD = 1.0
ENTITY_KIND_BONUS = 0.8


@dataclass
class CategoryRule:
    name: str
    phrases: dict[str, float]
    kinds: tuple = ()
    plan_hint: str = ""  # used by the planner, not the classifier


# Order matters: earlier rules win ties.
CATEGORY_TABLE: list[CategoryRule] = [
    # --- UE-centric ---
    CategoryRule("ue_status_monitoring",
                 {"status of ue": 2.2, "status": 1.0, "how is ue": 1.6, "doing": 0.4},
                 kinds=("ue",)),
    CategoryRule("ue_signal_quality",
                 {"signal quality": 2.5, "signal": 1.2, "rsrp": 1.6, "sinr": 1.6,
                  "reception": 1.6},
                 kinds=("ue",)),
    CategoryRule("ue_mobility_tracking",
                 {"where is": 2.2, "position of": 2.0, "location": 1.8, "heading": 1.4,
                  "moving": 1.4},
                 kinds=("ue",)),
    CategoryRule("ue_history_review",
                 {"history": 2.4, "past few ticks": 1.8, "recent activity": 2.0,
                  "what happened to": 1.6},
                 kinds=("ue",)),
    CategoryRule("ue_connection_diagnosis",
                 {"losing its connection": 2.6, "keeps dropping": 2.4,
                  "poor connection": 2.4, "can't stay connected": 2.4,
                  "connection issues": 2.2},
                 kinds=("ue",)),
    CategoryRule("ue_allocation_review",
                 {"prbs": 1.8, "resource blocks": 2.0, "allocation for": 1.8,
                  "allocated to": 1.8, "getting enough resources": 2.0},
                 kinds=("ue",)),
    CategoryRule("ue_handover_history",
                 {"handed over": 2.4, "handovers has": 2.0, "switched cells": 2.2,
                  "cell changes": 2.0},
                 kinds=("ue",)),
    CategoryRule("ue_throughput_check",
                 {"enough throughput": 2.4, "throughput for ue": 2.4,
                  "bandwidth for ue": 2.2, "data rate": 1.8},
                 kinds=("ue",)),
    # --- cell-centric ---
    CategoryRule("cell_load_monitoring",
                 {"load on": 2.0, "load of": 2.0, "how loaded": 2.2, "utilization of cell": 2.2,
                  "busy": 1.0},
                 kinds=("cell",)),
    CategoryRule("cell_kpi_report",
                 {"kpi": 2.4, "kpis": 2.4, "key performance": 2.2, "performance report": 2.0,
                  "metrics for": 1.6},
                 kinds=("cell",)),
    CategoryRule("congestion_analysis",
                 {"congestion": 2.6, "congested": 2.6, "overloaded": 2.2, "saturated": 2.0},
                 kinds=("cell",)),
    CategoryRule("throughput_analysis",
                 {"throughput": 2.0, "serving demand": 1.8, "traffic served": 1.8,
                  "capacity used": 1.4},
                 kinds=("cell",)),
    CategoryRule("interference_analysis",
                 {"interference": 2.6, "interfering": 2.4, "noise": 1.4, "low sinr across": 2.0},
                 kinds=("cell",)),
    CategoryRule("coverage_analysis",
                 {"coverage": 2.6, "weak signal area": 2.2, "dead zone": 2.4,
                  "signal strength across": 1.8},
                 kinds=("cell",)),
    CategoryRule("handover_analysis",
                 {"handover rate": 2.4, "ping-pong": 2.6, "ping pong": 2.6,
                  "handover activity": 2.2, "handovers between": 2.0},
                 kinds=("cell",)),
    CategoryRule("cell_comparison",
                 {"compare cell": 2.6, "compare cells": 2.6, "versus": 1.4,
                  "which cell is": 2.0, "difference between cell": 2.4},
                 kinds=("cell",)),
    CategoryRule("capacity_planning",
                 {"capacity planning": 2.8, "run out of capacity": 2.6, "headroom": 2.2,
                  "room for more": 2.0, "prb exhaustion": 2.4},
                 kinds=("cell",)),
    CategoryRule("load_balancing_review",
                 {"load balanced": 2.4, "load balancing": 2.4, "rebalance": 2.2,
                  "evenly distributed": 2.0, "imbalance": 2.2},
                 kinds=("cell",)),
    # --- network-wide ---
    CategoryRule("network_overview",
                 {"network overview": 2.8, "overall network": 2.4, "big picture": 2.0,
                  "network summary": 2.4},
                 kinds=()),
    CategoryRule("bs_summary_report",
                 {"base station summary": 2.6, "summary of base station": 2.6,
                  "summarize bs": 2.4, "site report": 2.0},
                 kinds=("bs",)),
    CategoryRule("backhaul_analysis",
                 {"backhaul": 2.8, "transport link": 2.0, "fronthaul": 2.2},
                 kinds=("bs",)),
    CategoryRule("topology_inventory",
                 {"how many cells": 2.4, "how many ues": 2.4, "inventory": 2.2,
                  "list all": 1.8, "topology": 2.2},
                 kinds=()),
    CategoryRule("slice_membership_review",
                 {"which ues are in": 2.4, "members of slice": 2.6, "slice membership": 2.6,
                  "who is on slice": 2.4, "belongs to": 1.4},
                 kinds=("slice",)),
    CategoryRule("slice_performance",
                 {"slice performing": 2.6, "slice performance": 2.6, "slice healthy": 2.2,
                  "performance of the slice": 2.4},
                 kinds=("slice",)),
    CategoryRule("network_health_check",
                 {"health check": 2.6, "everything ok": 2.2, "any problems": 2.2,
                  "network healthy": 2.4, "all good": 1.8},
                 kinds=()),
    CategoryRule("energy_efficiency_review",
                 {"energy": 2.4, "power consumption": 2.4, "tx power": 2.0,
                  "transmit power": 2.2},
                 kinds=("cell",)),
    # --- faults ---
    CategoryRule("fault_diagnosis",
                 {"dropping packets": 2.6, "why is sector": 1.8, "failing": 1.6,
                  "diagnose": 2.2, "what's wrong with": 2.0},
                 kinds=("cell", "ue")),
    CategoryRule("fault_prediction",
                 {"predict": 2.0, "at risk": 2.2, "likely to fail": 2.4,
                  "going to have problems": 2.2, "fault prediction": 2.8},
                 kinds=("cell",)),
    CategoryRule("anomaly_detection",
                 {"anomaly": 2.6, "anomalies": 2.6, "unusual": 2.2, "out of the ordinary": 2.2},
                 kinds=()),
    CategoryRule("alarm_triage",
                 {"alarms": 2.6, "alerts": 2.4, "error log": 2.2, "xapp errors": 2.4},
                 kinds=()),
    CategoryRule("root_cause_analysis",
                 {"root cause": 2.8, "underlying cause": 2.4, "why did this happen": 2.2,
                  "dig into": 1.6},
                 kinds=("cell", "ue")),
    # --- RIC / xApps ---
    CategoryRule("xapp_inventory",
                 {"xapps are running": 2.6, "which xapps": 2.6, "list xapps": 2.6,
                  "installed xapps": 2.4},
                 kinds=()),
    CategoryRule("xapp_lifecycle_management",
                 {"stop the xapp": 2.6, "xapp lifecycle": 2.6, "restart xapp": 2.4,
                  "xapp state": 2.2},
                 kinds=()),
    CategoryRule("ric_subscription_audit",
                 {"subscriptions are active": 2.4, "audit subscriptions": 2.6,
                  "ric subscriptions": 2.6, "who subscribed": 2.2},
                 kinds=()),
    CategoryRule("control_action_review",
                 {"control actions": 2.6, "actions did": 2.2, "commands issued": 2.4,
                  "what did the ric do": 2.4},
                 kinds=()),
    # --- AI services / edge ---
    CategoryRule("ai_services_management",
                 {"ai services": 2.4, "manage ai": 2.4, "service fleet": 2.2,
                  "deployments overview": 2.2},
                 kinds=("service",)),
    CategoryRule("service_catalog_browse",
                 {"catalog": 2.6, "what services": 2.2, "available services": 2.4,
                  "services can i": 2.2},
                 kinds=()),
    CategoryRule("service_recommendation",
                 {"recommend": 2.6, "which service should": 2.4, "best service for": 2.4,
                  "suggest a": 2.2},
                 kinds=("service",)),
    CategoryRule("service_deployment",
                 {"deploy": 2.4, "set up the service": 2.2, "roll out": 2.2,
                  "spin up": 2.2},
                 kinds=("service",)),
    CategoryRule("service_placement_query",
                 {"where would": 2.2, "placed": 2.0, "placement": 2.4,
                  "which server would": 2.4},
                 kinds=("service",)),
    CategoryRule("service_status_check",
                 {"is it running": 2.2, "service running": 2.4, "service status": 2.4,
                  "up and running": 2.2},
                 kinds=("service",)),
    CategoryRule("service_subscription",
                 {"subscribe": 2.6, "sign me up": 2.4, "start using": 2.0},
                 kinds=("service",)),
    CategoryRule("service_unsubscription",
                 {"unsubscribe": 2.8, "cancel my subscription": 2.6, "stop using": 2.2,
                  "release the service": 2.4},
                 kinds=("service",)),
    CategoryRule("edge_utilization_review",
                 {"edge server utilization": 2.8, "edge utilization": 2.6,
                  "how full is edge": 2.4, "edge load": 2.2},
                 kinds=("edge_server",)),
    CategoryRule("edge_capacity_planning",
                 {"edge capacity": 2.6, "room on the edge": 2.4, "fit another service": 2.4,
                  "edge headroom": 2.6},
                 kinds=("edge_server", "service")),
    # --- simulator control / analytics ---
    CategoryRule("sim_advance",
                 {"advance the sim": 2.8, "run the sim": 2.4, "tick forward": 2.6,
                  "simulate": 2.0, "fast forward": 2.4},
                 kinds=()),
    CategoryRule("traffic_demand_analysis",
                 {"traffic demand": 2.6, "demand distribution": 2.4, "offered load": 2.2,
                  "how much traffic": 2.2},
                 kinds=("cell",)),
    CategoryRule("qos_compliance_check",
                 {"qos": 2.6, "quality of service": 2.6, "meeting targets": 2.2,
                  "sla": 2.4},
                 kinds=("slice",)),
    CategoryRule("historical_trend_analysis",
                 {"trend": 2.6, "over time": 2.2, "evolution": 2.2, "trajectory of": 2.0},
                 kinds=("cell", "ue")),
    CategoryRule("general_query",
                 {},
                 kinds=()),
]

CATEGORIES: list[str] = [rule.name for rule in CATEGORY_TABLE]
_RULES_BY_NAME = {rule.name: rule for rule in CATEGORY_TABLE}

_UE_RE = re.compile(r"\bue\s*#?\s*(\d+)")
_CELL_RE = re.compile(r"\b(?:cell|sector)\s*#?\s*(\d+)")
_BS_RE = re.compile(r"\b(?:bs|base\s*station|gnb)\s*#?\s*(\d+)")
_COREF_RE = re.compile(r"\b(?:that|this|the\s+same)\s+(ue|cell|sector|bs|base\s+station|service|slice)\b")

_KIND_ALIASES = {"sector": "cell", "base station": "bs"}


def extract_entities(utterance: str, session: ConversationSession | None = None) -> list[dict]:
    """All explicitly named entities, in order of appearance, deduplicated."""
    text = utterance.lower()
    found: list[tuple[int, dict]] = []
    for regex, kind in ((_UE_RE, "ue"), (_CELL_RE, "cell"), (_BS_RE, "bs")):
        for m in regex.finditer(text):
            found.append((m.start(), {"kind": kind, "id": int(m.group(1))}))

    testbed = getattr(session, "testbed", None) if session else None
    if testbed is not None:
        for spec in testbed.edge.catalog:
            idx = text.find(spec.id)
            if idx >= 0:
                found.append((idx, {"kind": "service", "id": spec.id}))
        for slice_id in testbed.world.slices:
            for m in re.finditer(rf"\b{re.escape(slice_id.lower())}\b", text):
                found.append((m.start(), {"kind": "slice", "id": slice_id}))
        for server_id in testbed.edge.servers:
            idx = text.find(server_id.lower())
            if idx >= 0:
                found.append((idx, {"kind": "edge_server", "id": server_id}))

    entities: list[dict] = []
    for _, ent in sorted(found, key=lambda pair: pair[0]):
        if ent not in entities:
            entities.append(ent)
    return entities


def resolve_coreferences(utterance: str, session: ConversationSession | None) -> list[dict]:
    """'that ue' / 'this cell' binds to the most recent entity of that kind."""
    if session is None or not session.turns:
        return []
    resolved = []
    for m in _COREF_RE.finditer(utterance.lower()):
        kind = _KIND_ALIASES.get(m.group(1), m.group(1))
        for turn in reversed(session.turns):
            hits = [e for e in turn.intent.entities if e["kind"] == kind]
            if hits:
                if hits[-1] not in resolved:
                    resolved.append(hits[-1])
                break
    return resolved


def classify_intent(utterance: str, session: ConversationSession | None = None) -> Intent:
    if not utterance or not utterance.strip():
        raise EmptyUtterance("utterance is empty")
    text = utterance.lower()

    entities = extract_entities(utterance, session)
    for ent in resolve_coreferences(utterance, session):
        if ent not in entities:
            entities.append(ent)
    kinds_present = {e["kind"] for e in entities}

    best_name, best_score = "general_query", 0.0
    for rule in CATEGORY_TABLE:
        score = sum(w for phrase, w in rule.phrases.items() if phrase in text)
        if score > 0 and any(k in kinds_present for k in rule.kinds):
            score += ENTITY_KIND_BONUS
        if score > best_score:
            best_name, best_score = rule.name, score

    if best_score < SCORE_THRESHOLD:
        return Intent(category="general_query", entities=entities, confidence=0.3)
    return Intent(category=best_name, entities=entities,
                  confidence=min(1.0, round(best_score / 3.0, 4)))
