"""Turn tool results into a grounded response.

Every digit in the output is copied from a tool result payload so the claim
checker can ground it. Floats go through four significant digits; generated
ids stay verbatim. Error clauses deliberately carry no digits because error
messages quote ids that never appear in any payload.
"""

from __future__ import annotations

from airan.agents.types import Intent, Plan, ToolCall

CAPABILITY_TEXT = ("I can report status for UEs and cells, diagnose faults, "
                   "review the RIC, and manage edge AI services. Name the UE, "
                   "cell, slice, or service you care about.")

REFUSAL_TEXT = ("I can't advance the simulation from this session; simulator "
                "control is restricted to the engineer console.")


def fmt(value) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, int):
        return str(value)
    text = f"{value:.4g}"
    if "e" in text or "E" in text:
        text = f"{value:.6f}".rstrip("0").rstrip(".") or "0"
    return text


def _ids(values) -> str:
    return ", ".join(fmt(v) if not isinstance(v, str) else v for v in values)


def _ue_status(p: dict) -> str:
    signal = (f"RSRP {fmt(p['rsrp_dbm'])} dBm, SINR {fmt(p['sinr_db'])} dB"
              if p.get("rsrp_dbm") is not None else "no measurement yet")
    return (f"UE {p['ue_id']} is served by cell {p['serving_cell']} at position "
            f"({fmt(p['position'][0])}, {fmt(p['position'][1])}) with {signal}, "
            f"holding {p['allocated_prbs']} of {p['traffic_demand']} requested PRBs "
            f"on slice {p['slice_id']}.")


def _ue_history(p: dict) -> str:
    if not p.get("records"):
        return f"UE {p['ue_id']} has no recorded history yet."
    last = p["records"][-1]
    return (f"UE {p['ue_id']} history spans {p['count']} records over a "
            f"{p['window']} tick window; the latest at tick {last['tick']} shows "
            f"cell {last['serving_cell']} at RSRP {fmt(last['rsrp_dbm'])} dBm.")


def _cell_load(p: dict) -> str:
    return (f"Cell {p['cell_id']} load is {fmt(p['load'])} with "
            f"{p['allocated_prbs']} of {p['prb_capacity']} PRBs allocated across "
            f"{p['attached_ues']} attached UEs.")


def _cell_kpi(p: dict) -> str:
    if p.get("mean_rsrp_dbm") is None:
        return (f"Cell {p['cell_id']} has no attached UEs; load {fmt(p['load'])}, "
                f"tx power {fmt(p['tx_power_dbm'])} dBm.")
    return (f"Cell {p['cell_id']} KPIs: load {fmt(p['load'])}, mean RSRP "
            f"{fmt(p['mean_rsrp_dbm'])} dBm, mean SINR {fmt(p['mean_sinr_db'])} dB, "
            f"tx power {fmt(p['tx_power_dbm'])} dBm, {p['attached_ues']} UEs attached.")


def _bs_summary(p: dict) -> str:
    servers = _ids(p["edge_servers"]) if p.get("edge_servers") else "none"
    return (f"BS {p['bs_id']} at ({fmt(p['position'][0])}, {fmt(p['position'][1])}) "
            f"hosts cells {_ids(p['cells'])} with mean load {fmt(p['mean_load'])}; "
            f"edge servers: {servers}.")


def _slice_members(p: dict) -> str:
    if not p["members"]:
        return f"Slice {p['slice_id']} ({p['name']}) has no admitted members."
    return (f"Slice {p['slice_id']} ({p['name']}) has {p['count']} members: "
            f"{_ids(p['members'])}.")


def _xapps(p: dict) -> str:
    if not p["xapps"]:
        return "No xApps are registered."
    parts = ", ".join(f"{x['id']} ({x['state']})" for x in p["xapps"])
    return f"{p['count']} xApps registered: {parts}."


def _subscriptions(p: dict) -> str:
    return (f"The RIC holds {p['count']} AI service subscriptions, "
            f"{p['active']} active.")


def _service_status(p: dict) -> str:
    deps = p.get("deployments") or []
    if not deps:
        placement = "no deployments"
    else:
        placement = "deployed as " + ", ".join(
            f"{d['deployment_id']} on {d['server_id']} ({d['state']})" for d in deps)
    running = "running" if p.get("running") else "not running"
    return (f"Service {p['service_id']} ({p['modality']}, tier {p['accuracy_tier']}, "
            f"{p['latency_class']}) is {running}; {placement}.")


def _utilization(p: dict) -> str:
    util = p["utilization"]
    hosting = _ids(p["deployments"]) if p.get("deployments") else "nothing"
    return (f"Edge server {p['server_id']} peaks at {fmt(p['max_utilization'])} "
            f"utilization (cpu {fmt(util['cpu'])}, gpu {fmt(util['gpu'])}, "
            f"mem {fmt(util['mem'])}), hosting: {hosting}.")


def _ue_all(p: dict) -> str:
    return f"{p['count']} UEs online: {_ids(p['ue_ids'])}."


def _cell_all(p: dict) -> str:
    return f"{p['count']} cells on air: {_ids(p['cell_ids'])}."


def _service_all(p: dict) -> str:
    return f"{p['count']} services in the catalog: {_ids(p['service_ids'])}."


_GET_RENDERERS = {
    "status:ue": _ue_status, "history:ue": _ue_history, "load:cell": _cell_load,
    "kpi:cell": _cell_kpi, "summary:bs": _bs_summary, "members:slice": _slice_members,
    "xapps:ric": _xapps, "subscriptions:ric": _subscriptions,
    "status:ai_service": _service_status, "utilization:edge_server": _utilization,
}

_LIST_RENDERERS = {"ue": _ue_all, "cell": _cell_all, "ai_service": _service_all}


def _clause(call: ToolCall) -> str:
    if call.is_error:
        err = call.result.get("error", {})
        return f"A {call.tool} step failed ({err.get('type', 'ToolError')})."
    result = call.result
    if call.tool == "knowledge.get":
        parts = result["path"].split("/")
        renderer = _GET_RENDERERS.get(f"{parts[-1]}:{parts[0]}")
        return renderer(result["payload"]) if renderer else ""
    if call.tool == "knowledge.list":
        renderer = _LIST_RENDERERS.get(result["path"].split("/")[0])
        return renderer(result["payload"]) if renderer else ""
    if call.tool == "sim.tick":
        return (f"Advanced the simulation {result['advanced']} ticks; now at tick "
                f"{result['tick']}.")
    if call.tool == "deploy.profile":
        if not result["recommendations"]:
            return "No catalog service fits those requirements."
        top = result["recommendations"][0]
        return (f"{result['count']} candidates fit; top recommendation is "
                f"{top['service_id']} (tier {top['accuracy_tier']}, "
                f"{top['latency_class']}).")
    if call.tool == "deploy.place":
        return f"Service {result['service_id']} would run on {result['server_id']}."
    if call.tool == "deploy.subscribe":
        dep = (f"deployment {result['deployment_id']} is {result['deployment_state']}"
               if result.get("deployment_id") else "deployment is being prepared")
        return (f"Subscribed to {result['service_id']}: subscription "
                f"{result['subscription_id']} is {result['status']}; {dep}.")
    if call.tool == "deploy.unsubscribe":
        return (f"Subscription {result['subscription_id']} to "
                f"{result['service_id']} is now {result['status']}.")
    return ""


def synthesize(intent: Intent, plan: Plan, tool_calls: list[ToolCall]) -> str:
    parts: list[str] = []
    if any("refused" in note for note in plan.notes):
        parts.append(REFUSAL_TEXT)
    for call in tool_calls:
        clause = _clause(call)
        if clause:
            parts.append(clause)
    if not parts:
        parts.append(CAPABILITY_TEXT)
    return " ".join(parts)
