"""Near-real-time controller: xApp registry, event fan-out, control actions,
and AI service subscription management backed by the edge ledger.

xApps run synchronously inside the tick; their actions are queued and applied
by the owner at the start of the next tick, which keeps runs deterministic.
An xApp exception is downgraded to an error-log entry, never a crash.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from airan.edge import EdgeManager
from airan.errors import DuplicateSubscription, DuplicateXApp, UnknownSubscription
from airan.sim.types import EventKind, NetworkEvent

REGISTERED = "Registered"
ACTIVE = "Active"
STOPPED = "Stopped"

HANDOVER_COMMAND = "HandoverCommand"
PRB_QUOTA_CHANGE = "PRBQuotaChange"
AI_SERVICE_SCALE = "AIServiceScale"

SUB_ACTIVE = "Active"
SUB_TERMINATED = "Terminated"

DEFAULT_IMBALANCE_THRESHOLD = 0.2
DEFAULT_ELIGIBILITY_MARGIN_DB = 6.0


@dataclass
class XAppDescriptor:
    id: str
    name: str
    subscriptions: set[EventKind]
    state: str = ACTIVE
    params: dict = field(default_factory=dict)


@dataclass
class ControlAction:
    kind: str
    issuer: str
    payload: dict
    tick: int


@dataclass
class AISubscription:
    id: str
    service_id: str
    subscriber: str
    status: str = SUB_ACTIVE


def load_balance_step(cell_loads: dict[int, float], ues: dict,
                      threshold: float = DEFAULT_IMBALANCE_THRESHOLD,
                      margin_db: float = DEFAULT_ELIGIBILITY_MARGIN_DB) -> list[dict]:
    """One rebalancing decision: at most one UE moved hot cell -> cold cell.

    `ues` maps ue id to an object with serving_cell and measurement. A UE is
    eligible only if its rsrp toward the cold cell is within margin_db of its
    serving rsrp; among eligible UEs the best target rsrp wins, ties to the
    lower UE id. Returns HandoverCommand payloads.
    """
    for cid, load in cell_loads.items():
        if not 0.0 <= load <= 1.0:
            raise ValueError(f"cell {cid} load {load} outside [0,1]")
    if len(cell_loads) < 2:
        return []
    hot = max(sorted(cell_loads), key=lambda c: cell_loads[c])
    cold = min(sorted(cell_loads), key=lambda c: cell_loads[c])
    if cell_loads[hot] - cell_loads[cold] <= threshold:
        return []

    best = None
    for uid in sorted(ues):
        ue = ues[uid]
        if ue.serving_cell != hot:
            continue
        serving_rep = ue.measurement.get(hot)
        target_rep = ue.measurement.get(cold)
        if serving_rep is None or target_rep is None:
            continue
        if target_rep.rsrp < serving_rep.rsrp - margin_db:
            continue
        key = (-target_rep.rsrp, uid)
        if best is None or key < best[0]:
            best = (key, uid)
    if best is None:
        return []
    return [{"ue_id": best[1], "source_cell": hot, "target_cell": cold}]


class LoadBalancerXApp:
    """Watches tick completions and nudges one UE off the hottest cell."""

    def __init__(self, world_source, threshold: float = DEFAULT_IMBALANCE_THRESHOLD,
                 margin_db: float = DEFAULT_ELIGIBILITY_MARGIN_DB):
        self._world_source = world_source
        self.threshold = threshold
        self.margin_db = margin_db

    def __call__(self, event: NetworkEvent) -> list[ControlAction]:
        world = self._world_source()
        loads = {cid: cell.load for cid, cell in world.cells.items()}
        commands = load_balance_step(loads, world.ues, self.threshold, self.margin_db)
        return [ControlAction(kind=HANDOVER_COMMAND, issuer="", payload=c,
                              tick=event.tick)
                for c in commands]


class MonitorXApp:
    """Counts events by kind; useful as a subscription smoke source."""

    def __init__(self):
        self.counts: dict[str, int] = {}

    def __call__(self, event: NetworkEvent) -> list[ControlAction]:
        self.counts[event.kind.value] = self.counts.get(event.kind.value, 0) + 1
        return []


class RIC:
    def __init__(self, edge: EdgeManager):
        self.edge = edge
        self._registry: dict[str, tuple[XAppDescriptor, object]] = {}
        self._ever_registered: set[str] = set()
        self.error_log: list[dict] = []
        self.subscriptions: dict[str, AISubscription] = {}
        self._active_subs: dict[tuple[str, str], str] = {}  # (service, subscriber) -> sub id
        self._service_deployment: dict[str, str] = {}
        self._next_sub = 1

    # --- xApp lifecycle ---

    def register_xapp(self, descriptor: XAppDescriptor, handler) -> str:
        if descriptor.id in self._ever_registered:
            raise DuplicateXApp(f"xApp id {descriptor.id!r} was already registered")
        descriptor.state = ACTIVE
        self._registry[descriptor.id] = (descriptor, handler)
        self._ever_registered.add(descriptor.id)
        return descriptor.id

    def stop_xapp(self, xapp_id: str) -> None:
        descriptor, _ = self._registry[xapp_id]
        descriptor.state = STOPPED

    def xapps(self) -> list[XAppDescriptor]:
        return [d for d, _ in self._registry.values()]

    # --- event fan-out ---

    def dispatch_event(self, event: NetworkEvent) -> list[ControlAction]:
        actions: list[ControlAction] = []
        for descriptor, handler in self._registry.values():
            if descriptor.state != ACTIVE or event.kind not in descriptor.subscriptions:
                continue
            try:
                produced = handler(event) or []
            except Exception as exc:
                self.error_log.append({
                    "xapp": descriptor.id, "event_kind": event.kind.value,
                    "tick": event.tick, "error": str(exc)})
                continue
            for action in produced:
                action.issuer = descriptor.id
                action.tick = event.tick
                actions.append(action)
        return actions

    # --- AI service subscriptions ---

    def manage_ai_subscription(self, service_id: str, subscriber: str,
                               action: str) -> AISubscription:
        if action == "subscribe":
            return self._subscribe(service_id, subscriber)
        if action == "unsubscribe":
            return self._unsubscribe(service_id, subscriber)
        raise ValueError(f"unknown subscription action {action!r}")

    def _subscribe(self, service_id: str, subscriber: str) -> AISubscription:
        spec = self.edge.get_service(service_id)
        key = (service_id, subscriber)
        if key in self._active_subs:
            raise DuplicateSubscription(
                f"{subscriber!r} already holds an active subscription to {service_id!r}")
        dep = self.edge.running_deployment(service_id)
        if dep is None:
            dep = self.edge.deploy(spec)
        self.edge.acquire(dep.id)
        self._service_deployment[service_id] = dep.id
        sub = AISubscription(id=f"sub{self._next_sub}", service_id=service_id,
                             subscriber=subscriber)
        self._next_sub += 1
        self.subscriptions[sub.id] = sub
        self._active_subs[key] = sub.id
        return sub

    def _unsubscribe(self, service_id: str, subscriber: str) -> AISubscription:
        key = (service_id, subscriber)
        sub_id = self._active_subs.pop(key, None)
        if sub_id is None:
            raise UnknownSubscription(
                f"{subscriber!r} holds no active subscription to {service_id!r}")
        sub = self.subscriptions[sub_id]
        sub.status = SUB_TERMINATED
        dep = self.edge.release(self._service_deployment[service_id])
        if dep.refcount == 0:
            self.edge.teardown(dep.id)
            del self._service_deployment[service_id]
        return sub

    def active_subscription_count(self, service_id: str) -> int:
        return sum(1 for (sid, _sub) in self._active_subs if sid == service_id)

    # --- views for the knowledge layer ---

    def xapp_view(self) -> list[dict]:
        return [
            {"id": d.id, "name": d.name, "state": d.state,
             "subscriptions": sorted(k.value for k in d.subscriptions)}
            for d in self.xapps()
        ]

    def subscription_view(self) -> list[dict]:
        return [
            {"id": s.id, "service_id": s.service_id,
             "subscriber": s.subscriber, "status": s.status}
            for s in sorted(self.subscriptions.values(), key=lambda s: s.id)
        ]


def load_xapp_manifests(directory: str | Path) -> list[dict]:
    manifests = []
    for path in sorted(Path(directory).glob("*.json")):
        with open(path) as fh:
            raw = json.load(fh)
        for key in ("id", "name", "subscriptions"):
            if key not in raw:
                raise ValueError(f"{path.name}: manifest missing {key!r}")
        manifests.append(raw)
    return manifests


def build_xapp(manifest: dict, world_source) -> tuple[XAppDescriptor, object]:
    params = manifest.get("params", {})
    kind = params.get("type", "monitor")
    if kind == "load_balancer":
        handler = LoadBalancerXApp(
            world_source,
            threshold=float(params.get("threshold", DEFAULT_IMBALANCE_THRESHOLD)),
            margin_db=float(params.get("margin_db", DEFAULT_ELIGIBILITY_MARGIN_DB)))
    elif kind == "monitor":
        handler = MonitorXApp()
    else:
        raise ValueError(f"unknown xApp type {kind!r}")
    descriptor = XAppDescriptor(
        id=manifest["id"], name=manifest["name"],
        subscriptions={EventKind(k) for k in manifest["subscriptions"]},
        params=params)
    return descriptor, handler
