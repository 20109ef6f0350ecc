"""Knowledge router: pattern registry, version-keyed cache, entity history.

Patterns are slash paths where `*` matches exactly one segment. The most
specific match wins (fewest wildcards, ties by registration order), which
keeps routing equivalent to a brute-force scan and therefore checkable.
"""

from __future__ import annotations

import copy
from collections import deque
from dataclasses import dataclass, field

from airan.errors import NotRouted, PatternConflict, SourceFailure, UnknownEntity

DEFAULT_HISTORY_DEPTH = 1000


@dataclass
class SourceDescriptor:
    name: str
    patterns: list[str]
    capabilities: set[str] = field(default_factory=lambda: {"current_state"})


@dataclass
class KnowledgeQuery:
    path: str
    params: dict[str, str] = field(default_factory=dict)
    wants_history: bool = False

    def __post_init__(self):
        if not self.path or any(not seg for seg in self.path.split("/")):
            raise ValueError(f"malformed query path: {self.path!r}")


@dataclass
class QueryResult:
    source: str
    payload: dict
    state_version: int
    from_cache: bool = False


@dataclass
class HistoryRecord:
    entity_path: str
    tick: int
    snapshot: dict


class _Route:
    __slots__ = ("pattern", "segments", "wildcards", "order", "source", "handler")

    def __init__(self, pattern, order, source, handler):
        self.pattern = pattern
        self.segments = pattern.split("/")
        self.wildcards = self.segments.count("*")
        self.order = order
        self.source = source
        self.handler = handler

    def matches(self, path_segments):
        if len(self.segments) != len(path_segments):
            return False
        return all(p == "*" or p == s for p, s in zip(self.segments, path_segments))


class KnowledgeRouter:
    """Routes queries to registered sources; caches per World state_version."""

    def __init__(self, version_source=None, history_depth: int = DEFAULT_HISTORY_DEPTH):
        self._version_source = version_source or (lambda: 0)
        self._routes: list[_Route] = []
        self._by_pattern: dict[str, _Route] = {}
        self._cache: dict[tuple, tuple[str, dict]] = {}
        self._cache_version: int | None = None
        self._history: dict[str, deque[HistoryRecord]] = {}
        self._history_depth = history_depth

    # --- registry ---

    def register_source(self, descriptor: SourceDescriptor, handler) -> None:
        for pattern in descriptor.patterns:
            if pattern in self._by_pattern:
                raise PatternConflict(
                    f"pattern {pattern!r} already registered by "
                    f"{self._by_pattern[pattern].source!r}")
        for pattern in descriptor.patterns:
            route = _Route(pattern, len(self._routes), descriptor.name, handler)
            self._routes.append(route)
            self._by_pattern[pattern] = route

    def sources(self) -> list[str]:
        seen = []
        for route in self._routes:
            if route.source not in seen:
                seen.append(route.source)
        return seen

    def patterns(self) -> list[str]:
        return [r.pattern for r in self._routes]

    # --- routing ---

    def _select(self, path: str) -> _Route:
        segments = path.split("/")
        best = None
        for route in self._routes:
            if route.matches(segments):
                if best is None or (route.wildcards, route.order) < (best.wildcards, best.order):
                    best = route
        if best is None:
            raise NotRouted(f"no source pattern matches {path!r}")
        return best

    def route(self, query: KnowledgeQuery, world_version: int | None = None) -> QueryResult:
        route = self._select(query.path)
        version = self._version_source() if world_version is None else world_version
        try:
            payload = route.handler(query)
        except (NotRouted, UnknownEntity):
            raise
        except Exception as exc:
            raise SourceFailure(f"source {route.source!r} failed on {query.path!r}: {exc}") from exc
        return QueryResult(source=route.source, payload=payload, state_version=version)

    def query_cached(self, query: KnowledgeQuery, world_version: int | None = None) -> QueryResult:
        version = self._version_source() if world_version is None else world_version
        if version != self._cache_version:
            # every prior entry is keyed to a dead version
            self._cache.clear()
            self._cache_version = version
        key = (query.path, tuple(sorted(query.params.items())), version)
        hit = self._cache.get(key)
        if hit is not None:
            source, payload = hit
            return QueryResult(source=source, payload=copy.deepcopy(payload),
                               state_version=version, from_cache=True)
        result = self.route(query, world_version=version)
        self._cache[key] = (result.source, copy.deepcopy(result.payload))
        return result

    # --- history ---

    def record_history(self, entity_path: str, tick: int, snapshot: dict) -> None:
        records = self._history.get(entity_path)
        if records is None:
            records = deque(maxlen=self._history_depth)
            self._history[entity_path] = records
        if records and tick <= records[-1].tick:
            raise ValueError(
                f"history for {entity_path!r} must be strictly tick-ordered "
                f"(got {tick} after {records[-1].tick})")
        records.append(HistoryRecord(entity_path=entity_path, tick=tick, snapshot=snapshot))

    def get_history(self, entity_path: str, window: int) -> list[HistoryRecord]:
        records = self._history.get(entity_path)
        if not records:
            raise UnknownEntity(f"no history recorded for {entity_path!r}")
        cutoff = records[-1].tick - window
        return [r for r in records if r.tick > cutoff]
