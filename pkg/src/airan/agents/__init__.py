from airan.agents.backends import (HeuristicBackend, InjectionBackend,
                                   INJECTED_SENTENCE, RemoteBackend, ReplayBackend)
from airan.agents.claims import extract_and_ground, extract_claims, ground_claims
from airan.agents.intents import (CATEGORIES, classify_intent, extract_entities,
                                  resolve_coreferences)
from airan.agents.pipeline import run_turn
from airan.agents.planner import build_plan
from airan.agents.synthesizer import synthesize
from airan.agents.types import (AgentResponse, BackendDecision, Claim,
                                ConversationSession, ENGINEER, Intent, MAX_STEPS,
                                PERSONAS, Plan, PlanStep, ToolCall, Turn, USER)

__all__ = [
    "AgentResponse", "BackendDecision", "CATEGORIES", "Claim",
    "ConversationSession", "ENGINEER", "HeuristicBackend", "INJECTED_SENTENCE",
    "InjectionBackend", "Intent", "MAX_STEPS", "PERSONAS", "Plan", "PlanStep",
    "RemoteBackend", "ReplayBackend", "ToolCall", "Turn", "USER", "build_plan",
    "classify_intent", "extract_and_ground", "extract_claims", "extract_entities",
    "ground_claims", "resolve_coreferences", "run_turn", "synthesize",
]
