"""Claim extraction from response text and grounding against tool results.

Entities are extracted first and their spans masked so "UE 7" never also
yields a bare-number claim for 7. Grounding walks result payloads only;
bookkeeping fields (state_version, from_cache, path) never ground anything.
"""

from __future__ import annotations

import re

from airan.agents.types import Claim, ToolCall

_ENTITY_RE = re.compile(
    r"\b(ue|cell|sector|bs|base station|gnb|slice|server)\s+([a-z0-9_-]+)\b",
    re.IGNORECASE,
)
_ID_TOKEN_RE = re.compile(r"\b([a-z][a-z0-9]*(?:-[a-z0-9]+)+)\b")
# lookbehind keeps digits embedded in identifiers ("sub1", "d2") out of claims
_NUMBER_RE = re.compile(r"(?<![\w.-])-?\d+(?:\.\d+)?")

_KIND_ALIASES = {
    "sector": "cell",
    "base station": "bs",
    "gnb": "bs",
    "server": "edge_server",
}

REL_TOLERANCE = 0.01


def _payload_of(result: dict) -> object:
    if isinstance(result, dict) and "payload" in result:
        return result["payload"]
    return result


def _leaves(value: object, out: list) -> None:
    if isinstance(value, dict):
        for v in value.values():
            _leaves(v, out)
    elif isinstance(value, (list, tuple)):
        for v in value:
            _leaves(v, out)
    else:
        out.append(value)


def _numeric_match(claim_value: float, leaf: object) -> bool:
    if isinstance(leaf, bool) or not isinstance(leaf, (int, float)):
        return False
    if leaf == 0 or claim_value == 0:
        return leaf == claim_value
    return abs(leaf - claim_value) <= REL_TOLERANCE * max(abs(leaf), abs(claim_value))


def _entity_match(entity_id: object, leaf: object) -> bool:
    if isinstance(leaf, bool):
        return False
    if isinstance(entity_id, int):
        return isinstance(leaf, int) and leaf == entity_id
    return isinstance(leaf, str) and leaf == entity_id


def extract_claims(text: str) -> list[Claim]:
    found: list[tuple[int, Claim]] = []
    masked = list(text)

    def mask(start: int, end: int) -> None:
        for i in range(start, end):
            masked[i] = " "

    for m in _ENTITY_RE.finditer(text):
        kind = _KIND_ALIASES.get(m.group(1).lower(), m.group(1).lower())
        raw = m.group(2)
        entity_id: object = int(raw) if raw.isdigit() else raw
        found.append((m.start(), Claim(span=m.group(0),
                                       value={"kind": kind, "id": entity_id},
                                       grounding=None)))
        mask(m.start(), m.end())

    remainder = "".join(masked)
    for m in _ID_TOKEN_RE.finditer(remainder):
        found.append((m.start(), Claim(span=m.group(0),
                                       value={"kind": "service", "id": m.group(1)},
                                       grounding=None)))
        mask(m.start(), m.end())

    remainder = "".join(masked)
    for m in _NUMBER_RE.finditer(remainder):
        found.append((m.start(), Claim(span=m.group(0), value=float(m.group(0)),
                                       grounding=None)))

    found.sort(key=lambda pair: pair[0])
    return [claim for _, claim in found]


def ground_claims(claims: list[Claim], tool_calls: list[ToolCall]) -> None:
    """Attach the id of the first tool call whose payload supports each claim."""
    pools: list[tuple[str, list]] = []
    for call in tool_calls:
        if call.is_error:
            continue
        leaves: list = []
        _leaves(_payload_of(call.result), leaves)
        pools.append((call.id, leaves))

    for claim in claims:
        claim.grounding = None
        is_entity = isinstance(claim.value, dict)
        target = claim.value["id"] if is_entity else claim.value
        for call_id, leaves in pools:
            for leaf in leaves:
                match = (_entity_match(target, leaf) if is_entity
                         else _numeric_match(target, leaf))
                if match:
                    claim.grounding = call_id
                    break
            if claim.grounding is not None:
                break


def extract_and_ground(text: str, tool_calls: list[ToolCall]) -> list[Claim]:
    claims = extract_claims(text)
    ground_claims(claims, tool_calls)
    return claims
