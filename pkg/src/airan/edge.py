"""Edge AI side: service catalog, requirement profiling, placement, deployments.

Placement minimizes the post-placement maximum utilization across the three
resource axes (cpu, gpu, mem). Deployments debit the server ledger at Pending
and credit it back at Terminated, so free + live requests = capacity always.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from airan.errors import (DeploymentBusy, InsufficientCapacity, NoMatchingService,
                          UnknownDeployment, UnknownEntity, UnknownService)
from airan.sim.types import EventKind, NetworkEvent

MODALITIES = ("vision", "nlp", "predictive")
LATENCY_ORDER = {"realtime": 0, "interactive": 1, "batch": 2}
AXES = ("cpu", "gpu", "mem")

DEFAULT_PULL_DELAY = 2

PENDING = "Pending"
PULLING = "Pulling"
RUNNING = "Running"
TERMINATED = "Terminated"
_STATE_RANK = {PENDING: 0, PULLING: 1, RUNNING: 2, TERMINATED: 3}


@dataclass
class AIServiceSpec:
    id: str
    modality: str
    image_ref: str
    cpu_req: float
    gpu_req: float
    mem_req: float  # MB
    latency_class: str
    accuracy_tier: int

    def validate(self) -> None:
        if self.modality not in MODALITIES:
            raise ValueError(f"service {self.id}: unknown modality {self.modality!r}")
        if self.latency_class not in LATENCY_ORDER:
            raise ValueError(f"service {self.id}: unknown latency class {self.latency_class!r}")
        if not 1 <= int(self.accuracy_tier) <= 5:
            raise ValueError(f"service {self.id}: accuracy tier must be 1-5")
        for axis in AXES:
            if getattr(self, f"{axis}_req") <= 0:
                raise ValueError(f"service {self.id}: {axis} requirement must be positive")

    def requests(self) -> dict[str, float]:
        return {axis: float(getattr(self, f"{axis}_req")) for axis in AXES}


@dataclass
class UserRequirement:
    description: str
    modality: str
    max_latency_class: str = "batch"
    min_accuracy_tier: int = 1


@dataclass
class EdgeServer:
    id: str
    base_station: int
    cpu_capacity: float = 8.0
    gpu_capacity: float = 2.0
    mem_capacity: float = 16384.0
    deployments: set[str] = field(default_factory=set)
    used: dict[str, float] = field(default_factory=lambda: dict.fromkeys(AXES, 0.0))

    def capacity(self, axis: str) -> float:
        return float(getattr(self, f"{axis}_capacity"))

    def free(self, axis: str) -> float:
        return self.capacity(axis) - self.used[axis]

    def fits(self, spec: AIServiceSpec) -> bool:
        return all(self.free(axis) >= req for axis, req in spec.requests().items())

    def utilization(self) -> dict[str, float]:
        return {axis: self.used[axis] / self.capacity(axis) for axis in AXES}


@dataclass
class Deployment:
    id: str
    service_id: str
    server_id: str
    state: str = PENDING
    refcount: int = 0
    pull_remaining: int = DEFAULT_PULL_DELAY
    # pinned at deploy time so the ledger never depends on catalog lookups
    requests: dict[str, float] = field(default_factory=dict)

    def advance_state(self, new_state: str) -> None:
        if _STATE_RANK[new_state] < _STATE_RANK[self.state]:
            raise ValueError(f"deployment {self.id}: cannot move {self.state} -> {new_state}")
        self.state = new_state


def load_catalog(path: str | Path) -> list[AIServiceSpec]:
    with open(path) as fh:
        raw = json.load(fh)
    catalog = []
    for entry in raw:
        spec = AIServiceSpec(
            id=entry["id"],
            modality=entry["modality"],
            image_ref=entry["image_ref"],
            cpu_req=float(entry["cpu_req"]),
            gpu_req=float(entry["gpu_req"]),
            mem_req=float(entry["mem_req"]),
            latency_class=entry["latency_class"],
            accuracy_tier=int(entry["accuracy_tier"]),
        )
        spec.validate()
        catalog.append(spec)
    if len({s.id for s in catalog}) != len(catalog):
        raise ValueError("duplicate service ids in catalog")
    return catalog


def profile_requirements(req: UserRequirement,
                         catalog: list[AIServiceSpec]) -> list[AIServiceSpec]:
    """Hard-filter the catalog, then rank survivors.

    Filters: same modality, latency class no slower than allowed, accuracy
    tier at least the minimum. Rank: accuracy desc, then total resource
    request (normalized per axis by the catalog-wide maximum) asc, then id.
    """
    if not catalog:
        raise ValueError("catalog is empty")
    if req.modality not in MODALITIES:
        raise ValueError(f"unknown modality {req.modality!r}")
    if req.max_latency_class not in LATENCY_ORDER:
        raise ValueError(f"unknown latency class {req.max_latency_class!r}")

    survivors = [
        s for s in catalog
        if s.modality == req.modality
        and LATENCY_ORDER[s.latency_class] <= LATENCY_ORDER[req.max_latency_class]
        and s.accuracy_tier >= req.min_accuracy_tier
    ]
    if not survivors:
        raise NoMatchingService(
            f"no {req.modality} service within latency {req.max_latency_class!r} "
            f"at tier >= {req.min_accuracy_tier}")

    axis_max = {axis: max(getattr(s, f"{axis}_req") for s in catalog) for axis in AXES}

    def footprint(s: AIServiceSpec) -> float:
        return sum(getattr(s, f"{axis}_req") / axis_max[axis] for axis in AXES)

    return sorted(survivors, key=lambda s: (-s.accuracy_tier, footprint(s), s.id))


def place_service(spec: AIServiceSpec, servers: list[EdgeServer]) -> str:
    """Pick the server whose worst axis stays lowest after placement."""
    if not servers:
        raise ValueError("no edge servers configured")
    best = None
    for server in servers:
        if not server.fits(spec):
            continue
        post = max((server.used[axis] + req) / server.capacity(axis)
                   for axis, req in spec.requests().items())
        if best is None or (post, server.id) < best[:2]:
            best = (post, server.id)
    if best is None:
        raise InsufficientCapacity(f"no server can host {spec.id}")
    return best[1]


class EdgeManager:
    """Owns the catalog, the server fleet, and the deployment ledger."""

    def __init__(self, catalog: list[AIServiceSpec] | None = None,
                 pull_delay: int = DEFAULT_PULL_DELAY):
        self.catalog: list[AIServiceSpec] = list(catalog or [])
        self.servers: dict[str, EdgeServer] = {}
        self.deployments: dict[str, Deployment] = {}
        self.pull_delay = pull_delay
        self._next_deployment = 1

    # --- fleet / catalog ---

    def add_server(self, server: EdgeServer) -> None:
        if server.id in self.servers:
            raise ValueError(f"edge server {server.id!r} already exists")
        self.servers[server.id] = server

    def get_service(self, service_id: str) -> AIServiceSpec:
        for spec in self.catalog:
            if spec.id == service_id:
                return spec
        raise UnknownService(f"no service {service_id!r} in catalog")

    def server_list(self) -> list[EdgeServer]:
        return [self.servers[sid] for sid in sorted(self.servers)]

    # --- pipeline ---

    def profile(self, req: UserRequirement) -> list[AIServiceSpec]:
        return profile_requirements(req, self.catalog)

    def place(self, spec: AIServiceSpec) -> str:
        return place_service(spec, self.server_list())

    def deploy(self, spec: AIServiceSpec, server_id: str | None = None,
               pull_delay: int | None = None) -> Deployment:
        if server_id is None:
            server_id = self.place(spec)
        server = self.servers[server_id]
        if not server.fits(spec):  # re-check at commit
            raise InsufficientCapacity(
                f"server {server_id!r} can no longer host {spec.id}")
        delay = self.pull_delay if pull_delay is None else pull_delay
        dep = Deployment(
            id=f"d{self._next_deployment}",
            service_id=spec.id,
            server_id=server_id,
            pull_remaining=delay,
            requests=spec.requests(),
        )
        self._next_deployment += 1
        server.deployments.add(dep.id)
        self.deployments[dep.id] = dep
        self._recompute_used(server)
        if delay <= 0:
            dep.advance_state(RUNNING)
        return dep

    def teardown(self, deployment_id: str) -> Deployment:
        dep = self.deployments.get(deployment_id)
        if dep is None or dep.state == TERMINATED:
            raise UnknownDeployment(f"no live deployment {deployment_id!r}")
        if dep.refcount > 0:
            raise DeploymentBusy(
                f"deployment {deployment_id!r} has {dep.refcount} active subscriptions")
        server = self.servers[dep.server_id]
        server.deployments.discard(dep.id)
        dep.advance_state(TERMINATED)
        self._recompute_used(server)
        return dep

    def _recompute_used(self, server: EdgeServer) -> None:
        # summed fresh in id order: teardown restores the ledger bit-exact
        totals = dict.fromkeys(AXES, 0.0)
        for dep_id in sorted(server.deployments):
            for axis, req in self.deployments[dep_id].requests.items():
                totals[axis] += req
        server.used = totals

    # --- subscription refcounts (driven by the RIC) ---

    def acquire(self, deployment_id: str) -> Deployment:
        dep = self.deployments.get(deployment_id)
        if dep is None or dep.state == TERMINATED:
            raise UnknownDeployment(f"no live deployment {deployment_id!r}")
        dep.refcount += 1
        return dep

    def release(self, deployment_id: str) -> Deployment:
        dep = self.deployments.get(deployment_id)
        if dep is None:
            raise UnknownDeployment(f"no deployment {deployment_id!r}")
        if dep.refcount <= 0:
            raise ValueError(f"deployment {deployment_id!r} refcount already zero")
        dep.refcount -= 1
        return dep

    def running_deployment(self, service_id: str) -> Deployment | None:
        live = [d for d in self.deployments.values()
                if d.service_id == service_id and d.state != TERMINATED]
        return min(live, key=lambda d: d.id) if live else None

    # --- tick hook ---

    def on_tick(self, tick: int) -> list[NetworkEvent]:
        """Advance simulated image pulls; one state hop per deployment per tick."""
        events = []
        for dep_id in sorted(self.deployments):
            dep = self.deployments[dep_id]
            if dep.state not in (PENDING, PULLING):
                continue
            dep.pull_remaining -= 1
            if dep.pull_remaining <= 0:
                dep.advance_state(RUNNING)
            elif dep.state == PENDING:
                dep.advance_state(PULLING)
            events.append(NetworkEvent(
                kind=EventKind.AI_SERVICE_EVENT,
                payload={"deployment_id": dep.id, "service_id": dep.service_id,
                         "server_id": dep.server_id, "state": dep.state},
                tick=tick))
        return events

    # --- views for the knowledge layer ---

    def service_status(self, service_id: str) -> dict:
        spec = self.get_service(service_id)
        deps = [
            {"deployment_id": d.id, "server_id": d.server_id,
             "state": d.state, "refcount": d.refcount}
            for d in sorted(self.deployments.values(), key=lambda d: d.id)
            if d.service_id == service_id
        ]
        return {
            "service_id": spec.id, "modality": spec.modality,
            "latency_class": spec.latency_class, "accuracy_tier": spec.accuracy_tier,
            "deployments": deps,
            "running": any(d["state"] == RUNNING for d in deps),
        }

    def server_utilization(self, server_id: str) -> dict:
        server = self.servers.get(server_id)
        if server is None:
            raise UnknownEntity(f"no edge server {server_id!r}")
        util = server.utilization()
        return {
            "server_id": server.id, "base_station": server.base_station,
            "utilization": util, "max_utilization": max(util.values()),
            "deployments": sorted(server.deployments),
        }
