"""Conversation data model shared by agents, backends, and the evaluator."""

from __future__ import annotations

from dataclasses import dataclass, field

ENGINEER = "engineer"
USER = "user"
PERSONAS = (ENGINEER, USER)

MAX_STEPS = 8


@dataclass
class Intent:
    category: str
    entities: list[dict] = field(default_factory=list)  # {kind, id}
    confidence: float = 1.0


@dataclass
class PlanStep:
    description: str  # canonical label, e.g. "get ue/7/status"
    tool_family: str
    binding: dict | None = None  # {"tool": name, "params": {...}}


@dataclass
class Plan:
    steps: list[PlanStep] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


@dataclass
class ToolCall:
    id: str
    tool: str
    params: dict
    result: dict  # payload record, or {"error": {"type", "message"}}
    issued_at_step: int

    @property
    def is_error(self) -> bool:
        return "error" in self.result

    def to_record(self) -> dict:
        return {"id": self.id, "tool": self.tool, "params": self.params,
                "result": self.result, "issued_at_step": self.issued_at_step}


@dataclass
class Claim:
    span: str
    value: object  # float for numbers, {"kind", "id"} for entities
    grounding: str | None  # tool call id, or None when unsupported

    def to_record(self) -> dict:
        return {"span": self.span, "value": self.value, "grounding": self.grounding}


@dataclass
class AgentResponse:
    text: str
    claims: list[Claim] = field(default_factory=list)


@dataclass
class Turn:
    utterance: str
    intent: Intent
    plan: Plan
    tool_calls: list[ToolCall]
    response: AgentResponse
    latency: float = 0.0
    error: str | None = None

    def to_record(self) -> dict:
        return {
            "utterance": self.utterance,
            "intent": {"category": self.intent.category,
                       "entities": self.intent.entities,
                       "confidence": self.intent.confidence},
            "plan": {"steps": [{"description": s.description,
                                "tool_family": s.tool_family,
                                "binding": s.binding} for s in self.plan.steps],
                     "notes": self.plan.notes},
            "tool_calls": [c.to_record() for c in self.tool_calls],
            "response": {"text": self.response.text,
                         "claims": [c.to_record() for c in self.response.claims]},
            "latency": self.latency,
            "error": self.error,
        }


@dataclass
class ConversationSession:
    id: str
    persona: str
    testbed: object
    turns: list[Turn] = field(default_factory=list)

    def __post_init__(self):
        if self.persona not in PERSONAS:
            raise ValueError(f"unknown persona {self.persona!r}")


@dataclass
class BackendDecision:
    """One loop step: request a tool, or finish the turn with text."""
    tool_request: dict | None = None  # {"tool", "params"}
    final_text: str | None = None

    def __post_init__(self):
        if (self.tool_request is None) == (self.final_text is None):
            raise ValueError("decision must be exactly one of tool_request/final_text")
