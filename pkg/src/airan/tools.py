"""Agent tool surface over a Testbed.

Families: knowledge_get (single-entity reads), knowledge_list (bulk reads),
sim_control (advance the simulator; engineer persona only), deploy_pipeline
(profile/place/subscribe/unsubscribe). The respond family has no tools.
"""

from __future__ import annotations

from dataclasses import dataclass, field

KNOWLEDGE_GET = "knowledge_get"
KNOWLEDGE_LIST = "knowledge_list"
SIM_CONTROL = "sim_control"
DEPLOY_PIPELINE = "deploy_pipeline"
RESPOND = "respond"

TOOL_FAMILIES = (KNOWLEDGE_GET, KNOWLEDGE_LIST, SIM_CONTROL, DEPLOY_PIPELINE, RESPOND)


@dataclass
class ToolSpec:
    name: str
    family: str
    description: str
    params_schema: dict[str, dict]
    handler: object = field(repr=False, default=None)

    def required_params(self) -> list[str]:
        return [k for k, v in self.params_schema.items() if v.get("required")]


class ToolRegistry:
    def __init__(self):
        self._tools: dict[str, ToolSpec] = {}

    def register(self, spec: ToolSpec) -> None:
        if spec.name in self._tools:
            raise ValueError(f"tool {spec.name!r} already registered")
        self._tools[spec.name] = spec

    def get(self, name: str) -> ToolSpec:
        spec = self._tools.get(name)
        if spec is None:
            raise KeyError(f"unknown tool {name!r}")
        return spec

    def names(self) -> list[str]:
        return list(self._tools)

    def specs(self) -> list[ToolSpec]:
        return list(self._tools.values())

    def invoke(self, name: str, params: dict) -> dict:
        spec = self.get(name)
        missing = [k for k in spec.required_params() if k not in params]
        if missing:
            raise ValueError(f"{name}: missing required params {missing}")
        return spec.handler(params)


def build_registry(testbed) -> ToolRegistry:
    registry = ToolRegistry()

    def knowledge_get(params: dict) -> dict:
        path = params["path"]
        if path.split("/")[-1] == "_all":
            raise ValueError("bulk paths go through knowledge.list")
        extra = {k: str(v) for k, v in params.items() if k != "path"}
        result = testbed.query(path, extra)
        return {"path": path, "payload": result.payload,
                "state_version": result.state_version,
                "from_cache": result.from_cache}

    def knowledge_list(params: dict) -> dict:
        path = params["path"]
        if path.split("/")[-1] != "_all":
            raise ValueError("knowledge.list only accepts */_all paths")
        result = testbed.query(path)
        return {"path": path, "payload": result.payload,
                "state_version": result.state_version,
                "from_cache": result.from_cache}

    def sim_tick(params: dict) -> dict:
        n = int(params.get("n", 1))
        if not 1 <= n <= 1000:
            raise ValueError("tick count must be in 1..1000")
        testbed.tick(n)
        return {"advanced": n, "tick": testbed.world.tick,
                "state_version": testbed.world.state_version}

    def deploy_profile(params: dict) -> dict:
        recs = testbed.profile(
            description=params.get("description", ""),
            modality=params["modality"],
            max_latency_class=params.get("max_latency_class", "batch"),
            min_accuracy_tier=int(params.get("min_accuracy_tier", 1)))
        return {"recommendations": recs, "count": len(recs)}

    def deploy_place(params: dict) -> dict:
        return testbed.place(params["service_id"])

    def deploy_subscribe(params: dict) -> dict:
        return testbed.subscribe(params["service_id"], params["subscriber"])

    def deploy_unsubscribe(params: dict) -> dict:
        return testbed.unsubscribe(params["service_id"], params["subscriber"])

    registry.register(ToolSpec(
        name="knowledge.get", family=KNOWLEDGE_GET,
        description="Read one entity's state by path, e.g. ue/7/status or cell/2/kpi.",
        params_schema={"path": {"type": "string", "required": True},
                       "window": {"type": "string", "required": False}},
        handler=knowledge_get))
    registry.register(ToolSpec(
        name="knowledge.list", family=KNOWLEDGE_LIST,
        description="Bulk listing: ue/_all, cell/_all, or ai_service/_all.",
        params_schema={"path": {"type": "string", "required": True}},
        handler=knowledge_list))
    registry.register(ToolSpec(
        name="sim.tick", family=SIM_CONTROL,
        description="Advance the simulator n ticks (engineer persona only).",
        params_schema={"n": {"type": "integer", "required": False}},
        handler=sim_tick))
    registry.register(ToolSpec(
        name="deploy.profile", family=DEPLOY_PIPELINE,
        description="Rank catalog services against a user requirement.",
        params_schema={"description": {"type": "string", "required": False},
                       "modality": {"type": "string", "required": True},
                       "max_latency_class": {"type": "string", "required": False},
                       "min_accuracy_tier": {"type": "integer", "required": False}},
        handler=deploy_profile))
    registry.register(ToolSpec(
        name="deploy.place", family=DEPLOY_PIPELINE,
        description="Preview which edge server would host a service.",
        params_schema={"service_id": {"type": "string", "required": True}},
        handler=deploy_place))
    registry.register(ToolSpec(
        name="deploy.subscribe", family=DEPLOY_PIPELINE,
        description="Subscribe a session to an AI service, deploying it if needed.",
        params_schema={"service_id": {"type": "string", "required": True},
                       "subscriber": {"type": "string", "required": True}},
        handler=deploy_subscribe))
    registry.register(ToolSpec(
        name="deploy.unsubscribe", family=DEPLOY_PIPELINE,
        description="Release a session's subscription to an AI service.",
        params_schema={"service_id": {"type": "string", "required": True},
                       "subscriber": {"type": "string", "required": True}},
        handler=deploy_unsubscribe))
    return registry
