"""Canonical knowledge sources over the live testbed.

Path namespace (also the agent tool surface):
  ue/{id}/status    ue/{id}/history    ue/_all
  cell/{id}/load    cell/{id}/kpi      cell/_all
  bs/{id}/summary   slice/{id}/members
  ric/xapps         ric/subscriptions
  ai_service/{id}/status   ai_service/_all
  edge_server/{id}/utilization
"""

from __future__ import annotations

from airan.errors import UnknownEntity
from airan.knowledge.router import KnowledgeQuery, KnowledgeRouter, SourceDescriptor

DEFAULT_HISTORY_WINDOW = 10


def _int_segment(query: KnowledgeQuery, index: int, kind: str) -> int:
    seg = query.path.split("/")[index]
    try:
        return int(seg)
    except ValueError:
        raise UnknownEntity(f"{kind} id must be numeric, got {seg!r}") from None


def register_default_sources(router: KnowledgeRouter, testbed) -> None:
    world = lambda: testbed.world  # noqa: E731 - tiny accessor, lambda reads fine

    def ue_status(query: KnowledgeQuery) -> dict:
        w = world()
        uid = _int_segment(query, 1, "ue")
        ue = w.ues.get(uid)
        if ue is None:
            raise UnknownEntity(f"no UE {uid}")
        serving = ue.measurement.get(ue.serving_cell)
        return {
            "ue_id": uid,
            "position": [ue.position[0], ue.position[1]],
            "serving_cell": ue.serving_cell,
            "rsrp_dbm": None if serving is None else serving.rsrp,
            "sinr_db": None if serving is None else serving.sinr,
            "traffic_demand": ue.traffic_demand,
            "allocated_prbs": ue.allocated_prbs,
            "slice_id": ue.slice_id,
            "tick": w.tick,
        }

    def ue_all(query: KnowledgeQuery) -> dict:
        ids = sorted(world().ues)
        return {"ue_ids": ids, "count": len(ids)}

    def ue_history(query: KnowledgeQuery) -> dict:
        uid = _int_segment(query, 1, "ue")
        window = int(query.params.get("window", DEFAULT_HISTORY_WINDOW))
        records = router.get_history(f"ue/{uid}", window)
        return {
            "entity": f"ue/{uid}",
            "ue_id": uid,
            "window": window,
            "records": [r.snapshot for r in records],
            "count": len(records),
        }

    def cell_load(query: KnowledgeQuery) -> dict:
        w = world()
        cid = _int_segment(query, 1, "cell")
        cell = w.cells.get(cid)
        if cell is None:
            raise UnknownEntity(f"no cell {cid}")
        attached = [u for u in w.ues.values() if u.serving_cell == cid]
        return {
            "cell_id": cid,
            "load": cell.load,
            "allocated_prbs": sum(u.allocated_prbs for u in attached),
            "prb_capacity": cell.prb_capacity,
            "attached_ues": len(attached),
            "tick": w.tick,
        }

    def cell_kpi(query: KnowledgeQuery) -> dict:
        w = world()
        cid = _int_segment(query, 1, "cell")
        cell = w.cells.get(cid)
        if cell is None:
            raise UnknownEntity(f"no cell {cid}")
        attached = sorted(u.id for u in w.ues.values() if u.serving_cell == cid)
        reports = [w.ues[u].measurement.get(cid) for u in attached]
        reports = [r for r in reports if r is not None]
        mean = lambda xs: sum(xs) / len(xs) if xs else None  # noqa: E731
        return {
            "cell_id": cid,
            "load": cell.load,
            "attached_ues": len(attached),
            "attached_ue_ids": attached,
            "mean_rsrp_dbm": mean([r.rsrp for r in reports]),
            "mean_sinr_db": mean([r.sinr for r in reports]),
            "prb_capacity": cell.prb_capacity,
            "tx_power_dbm": cell.tx_power,
            "tick": w.tick,
        }

    def cell_all(query: KnowledgeQuery) -> dict:
        ids = sorted(world().cells)
        return {"cell_ids": ids, "count": len(ids)}

    def bs_summary(query: KnowledgeQuery) -> dict:
        w = world()
        bid = _int_segment(query, 1, "base station")
        bs = w.base_stations.get(bid)
        if bs is None:
            raise UnknownEntity(f"no base station {bid}")
        cells = sorted(bs.cell_ids)
        loads = [w.cells[c].load for c in cells]
        servers = [s for s in testbed.edge.servers.values() if s.base_station == bid]
        return {
            "bs_id": bid,
            "position": [bs.position[0], bs.position[1]],
            "cells": cells,
            "mean_load": sum(loads) / len(loads) if loads else 0.0,
            "edge_servers": sorted(s.id for s in servers),
            "tick": w.tick,
        }

    def slice_members(query: KnowledgeQuery) -> dict:
        w = world()
        sid = query.path.split("/")[1]
        sl = w.slices.get(sid)
        if sl is None:
            raise UnknownEntity(f"no slice {sid!r}")
        members = sorted(sl.admitted_ues)
        return {"slice_id": sid, "name": sl.name, "members": members,
                "count": len(members)}

    def ric_xapps(query: KnowledgeQuery) -> dict:
        xapps = testbed.ric.xapp_view()
        return {"xapps": xapps, "count": len(xapps)}

    def ric_subscriptions(query: KnowledgeQuery) -> dict:
        subs = testbed.ric.subscription_view()
        active = sum(1 for s in subs if s["status"] == "Active")
        return {"subscriptions": subs, "count": len(subs), "active": active}

    def service_status(query: KnowledgeQuery) -> dict:
        return testbed.edge.service_status(query.path.split("/")[1])

    def service_all(query: KnowledgeQuery) -> dict:
        ids = sorted(s.id for s in testbed.edge.catalog)
        return {"service_ids": ids, "count": len(ids)}

    def server_utilization(query: KnowledgeQuery) -> dict:
        return testbed.edge.server_utilization(query.path.split("/")[1])

    router.register_source(
        SourceDescriptor("sim-state", [
            "ue/*/status", "ue/_all", "cell/*/load", "cell/*/kpi", "cell/_all",
            "bs/*/summary", "slice/*/members",
        ]),
        _dispatch({
            "status": ue_status, "_all:ue": ue_all, "load": cell_load,
            "kpi": cell_kpi, "_all:cell": cell_all, "summary": bs_summary,
            "members": slice_members,
        }))
    router.register_source(
        SourceDescriptor("sim-history", ["ue/*/history"], capabilities={"historical"}),
        ue_history)
    router.register_source(
        SourceDescriptor("ric-registry", ["ric/xapps", "ric/subscriptions"]),
        _dispatch({"xapps": ric_xapps, "subscriptions": ric_subscriptions}))
    router.register_source(
        SourceDescriptor("edge-fleet", [
            "ai_service/*/status", "ai_service/_all", "edge_server/*/utilization",
        ]),
        _dispatch({"status": service_status, "_all:ai_service": service_all,
                   "utilization": server_utilization}))


def _dispatch(handlers):
    """Route within a source by the path's last segment (head-qualified for _all)."""

    def handle(query: KnowledgeQuery) -> dict:
        segments = query.path.split("/")
        key = segments[-1]
        if key == "_all":
            key = f"_all:{segments[0]}"
        return handlers[key](query)

    return handle
