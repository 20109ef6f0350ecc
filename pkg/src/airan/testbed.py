"""Composition root: one World wired to a RIC, an edge fleet, and the
knowledge router, advanced by a single-owner tick loop.

Control actions emitted by xApps during tick T apply at the start of tick
T+1. All mutations inside one tick are covered by that tick's single
state_version bump; out-of-band operations (subscriptions issued between
ticks) bump the version themselves so the cache never serves stale payloads.
"""

from __future__ import annotations

import importlib.resources
from pathlib import Path

from airan.edge import EdgeManager, EdgeServer, UserRequirement, load_catalog
from airan.knowledge import KnowledgeQuery, KnowledgeRouter, QueryResult
from airan.knowledge.sources import register_default_sources
from airan.ric import RIC, HANDOVER_COMMAND, build_xapp, load_xapp_manifests
from airan.sim import SimConfig, build_world, step
from airan.sim.types import EventKind, NetworkEvent, TickReport


def _data_path(name: str) -> Path:
    return Path(importlib.resources.files("airan").joinpath("data", name))


class Testbed:
    __test__ = False  # name collides with pytest's collector prefix

    def __init__(self, config: SimConfig, seed: int | None = None,
                 catalog_path: str | Path | None = None,
                 xapp_dir: str | Path | None = None,
                 load_xapps: bool = True):
        self.config = config
        self.world, boot_events = build_world(config, seed)

        catalog = load_catalog(catalog_path or _data_path("catalog.json"))
        self.edge = EdgeManager(catalog=catalog)
        if config.edge_servers:
            for raw in config.edge_servers:
                self.edge.add_server(EdgeServer(
                    id=raw["id"],
                    base_station=int(raw["base_station"]),
                    cpu_capacity=float(raw.get("cpu_capacity", 8.0)),
                    gpu_capacity=float(raw.get("gpu_capacity", 2.0)),
                    mem_capacity=float(raw.get("mem_capacity", 16384.0)),
                ))
        else:
            for bs_id in sorted(self.world.base_stations):
                self.edge.add_server(EdgeServer(id=f"edge-{bs_id}", base_station=bs_id))
        self.world.edge_servers = sorted(self.edge.servers)

        self.ric = RIC(self.edge)
        if load_xapps:
            manifests = load_xapp_manifests(xapp_dir or _data_path("xapps"))
            for manifest in manifests:
                descriptor, handler = build_xapp(manifest, lambda: self.world)
                self.ric.register_xapp(descriptor, handler)

        self.router = KnowledgeRouter(version_source=lambda: self.world.state_version)
        register_default_sources(self.router, self)

        self.events: list[NetworkEvent] = list(boot_events)
        self.pending_actions = []
        self._record_snapshots()

    # --- tick loop ---

    def tick(self, n: int = 1) -> list[TickReport]:
        reports = []
        for _ in range(n):
            reports.append(self._tick_once())
        return reports

    def _tick_once(self) -> TickReport:
        new_tick = self.world.tick + 1

        applied = []
        for action in self.pending_actions:
            event = self._apply_action(action, new_tick)
            if event is not None:
                applied.append(event)
        self.pending_actions = []

        edge_events = self.edge.on_tick(new_tick)
        report = step(self.world)  # bumps state_version for the whole tick
        tick_done = report.events[-1]
        events = applied + report.events[:-1] + edge_events + [tick_done]

        self._record_snapshots()
        for event in events:
            self.pending_actions.extend(self.ric.dispatch_event(event))
        self.events.extend(events)
        return TickReport(tick=new_tick, events=events)

    def _apply_action(self, action, tick: int) -> NetworkEvent | None:
        if action.kind != HANDOVER_COMMAND:
            return None
        p = action.payload
        ue = self.world.ues.get(p["ue_id"])
        if ue is None or ue.serving_cell != p["source_cell"]:
            return None  # world moved on since the command was issued
        if p["target_cell"] not in self.world.cells:
            return None
        ue.serving_cell = p["target_cell"]
        ue.a3_timers = {}
        self.world.last_handover_tick[ue.id] = tick
        return NetworkEvent(
            kind=EventKind.HANDOVER_EXECUTED,
            payload={"ue_id": ue.id, "source_cell": p["source_cell"],
                     "target_cell": p["target_cell"], "cause": f"xapp:{action.issuer}"},
            tick=tick)

    def _record_snapshots(self) -> None:
        w = self.world
        for uid in sorted(w.ues):
            ue = w.ues[uid]
            serving = ue.measurement.get(ue.serving_cell)
            self.router.record_history(f"ue/{uid}", w.tick, {
                "tick": w.tick,
                "position": [ue.position[0], ue.position[1]],
                "serving_cell": ue.serving_cell,
                "rsrp_dbm": None if serving is None else serving.rsrp,
                "sinr_db": None if serving is None else serving.sinr,
                "allocated_prbs": ue.allocated_prbs,
            })
        for cid in sorted(w.cells):
            cell = w.cells[cid]
            attached = sum(1 for u in w.ues.values() if u.serving_cell == cid)
            self.router.record_history(f"cell/{cid}", w.tick, {
                "tick": w.tick, "load": cell.load, "attached_ues": attached,
            })

    # --- knowledge reads ---

    def query(self, path: str, params: dict | None = None,
              use_cache: bool = True) -> QueryResult:
        q = KnowledgeQuery(path=path, params=params or {})
        if use_cache:
            return self.router.query_cached(q)
        return self.router.route(q)

    # --- deployment pipeline (out-of-band, version-bumping where mutating) ---

    def profile(self, description: str, modality: str,
                max_latency_class: str = "batch",
                min_accuracy_tier: int = 1) -> list[dict]:
        req = UserRequirement(description=description, modality=modality,
                              max_latency_class=max_latency_class,
                              min_accuracy_tier=min_accuracy_tier)
        ranked = self.edge.profile(req)
        return [
            {"service_id": s.id, "modality": s.modality, "accuracy_tier": s.accuracy_tier,
             "latency_class": s.latency_class, "rank": i + 1}
            for i, s in enumerate(ranked)
        ]

    def place(self, service_id: str) -> dict:
        spec = self.edge.get_service(service_id)
        server_id = self.edge.place(spec)
        return {"service_id": service_id, "server_id": server_id}

    def subscribe(self, service_id: str, subscriber: str) -> dict:
        sub = self.ric.manage_ai_subscription(service_id, subscriber, "subscribe")
        self.world.bump_version()
        dep = self.edge.running_deployment(service_id)
        return {"subscription_id": sub.id, "service_id": service_id,
                "status": sub.status,
                "deployment_id": None if dep is None else dep.id,
                "deployment_state": None if dep is None else dep.state}

    def unsubscribe(self, service_id: str, subscriber: str) -> dict:
        sub = self.ric.manage_ai_subscription(service_id, subscriber, "unsubscribe")
        self.world.bump_version()
        return {"subscription_id": sub.id, "service_id": service_id,
                "status": sub.status}


def default_config() -> SimConfig:
    return SimConfig.load(_data_path("desk_base.json"))
