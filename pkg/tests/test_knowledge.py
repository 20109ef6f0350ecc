"""Router, cache, and history semantics, checked against brute-force oracles."""

import random

import pytest

from airan.errors import NotRouted, PatternConflict, SourceFailure, UnknownEntity
from airan.knowledge import KnowledgeQuery, KnowledgeRouter, SourceDescriptor


def make_handler(name):
    return lambda query: {"answered_by": name, "path": query.path}


def test_register_and_route():
    router = KnowledgeRouter()
    router.register_source(SourceDescriptor("ue-src", ["ue/*/status"]), make_handler("ue-src"))
    result = router.route(KnowledgeQuery("ue/7/status"))
    assert result.source == "ue-src"
    assert result.payload["answered_by"] == "ue-src"
    assert result.from_cache is False


def test_duplicate_pattern_rejected():
    router = KnowledgeRouter()
    router.register_source(SourceDescriptor("a", ["ue/*/status"]), make_handler("a"))
    with pytest.raises(PatternConflict):
        router.register_source(SourceDescriptor("b", ["ue/*/status"]), make_handler("b"))


def test_duplicate_rejection_is_atomic():
    router = KnowledgeRouter()
    router.register_source(SourceDescriptor("a", ["x/y"]), make_handler("a"))
    with pytest.raises(PatternConflict):
        router.register_source(SourceDescriptor("b", ["fresh/path", "x/y"]), make_handler("b"))
    # the non-conflicting pattern from the failed call must not linger
    with pytest.raises(NotRouted):
        router.route(KnowledgeQuery("fresh/path"))


def test_distinct_strings_can_overlap():
    router = KnowledgeRouter()
    router.register_source(SourceDescriptor("wild", ["ue/*/status"]), make_handler("wild"))
    router.register_source(SourceDescriptor("exact", ["ue/7/status"]), make_handler("exact"))
    assert router.route(KnowledgeQuery("ue/7/status")).source == "exact"
    assert router.route(KnowledgeQuery("ue/8/status")).source == "wild"


def test_tie_broken_by_registration_order():
    router = KnowledgeRouter()
    router.register_source(SourceDescriptor("first", ["ue/*/kpi"]), make_handler("first"))
    router.register_source(SourceDescriptor("second", ["*/7/kpi"]), make_handler("second"))
    # both have one wildcard; first registration wins
    assert router.route(KnowledgeQuery("ue/7/kpi")).source == "first"


def test_wildcard_is_single_segment():
    router = KnowledgeRouter()
    router.register_source(SourceDescriptor("a", ["ue/*"]), make_handler("a"))
    with pytest.raises(NotRouted):
        router.route(KnowledgeQuery("ue/7/status"))


def test_unrouted_path():
    router = KnowledgeRouter()
    router.register_source(SourceDescriptor("a", ["ue/*/status"]), make_handler("a"))
    with pytest.raises(NotRouted):
        router.route(KnowledgeQuery("core/unknown"))


def test_malformed_paths_rejected():
    with pytest.raises(ValueError):
        KnowledgeQuery("")
    with pytest.raises(ValueError):
        KnowledgeQuery("ue//status")


def test_source_failure_wrapped():
    router = KnowledgeRouter()

    def boom(query):
        raise RuntimeError("backend out to lunch")

    router.register_source(SourceDescriptor("flaky", ["cell/*/load"]), boom)
    with pytest.raises(SourceFailure, match="flaky"):
        router.route(KnowledgeQuery("cell/3/load"))


def brute_force_route(patterns, path):
    """Reference implementation: scan every pattern, pick by the stated rule."""
    segments = path.split("/")
    best = None
    for order, pattern in enumerate(patterns):
        pseg = pattern.split("/")
        if len(pseg) != len(segments):
            continue
        if not all(p == "*" or p == s for p, s in zip(pseg, segments)):
            continue
        key = (pseg.count("*"), order)
        if best is None or key < best[0]:
            best = (key, pattern)
    return None if best is None else best[1]


def test_route_equals_brute_force_on_random_registries():
    rng = random.Random(1234)
    heads = ["ue", "cell", "bs", "slice", "ric"]
    for _ in range(300):
        n_patterns = rng.randint(1, 12)
        patterns = []
        while len(patterns) < n_patterns:
            depth = rng.randint(1, 4)
            parts = [rng.choice(heads + ["*", str(rng.randint(0, 5))]) for _ in range(depth)]
            p = "/".join(parts)
            if p not in patterns:
                patterns.append(p)
        router = KnowledgeRouter()
        for i, p in enumerate(patterns):
            router.register_source(SourceDescriptor(f"s{i}", [p]), make_handler(p))
        depth = rng.randint(1, 4)
        path = "/".join(rng.choice(heads + [str(rng.randint(0, 5))]) for _ in range(depth))
        expected = brute_force_route(patterns, path)
        if expected is None:
            with pytest.raises(NotRouted):
                router.route(KnowledgeQuery(path))
        else:
            assert router.route(KnowledgeQuery(path)).payload["answered_by"] == expected


# --- cache ---

class VersionCounter:
    def __init__(self):
        self.value = 0

    def __call__(self):
        return self.value


def test_cache_hit_within_version():
    version = VersionCounter()
    router = KnowledgeRouter(version_source=version)
    calls = []

    def handler(query):
        calls.append(query.path)
        return {"n": len(calls)}

    router.register_source(SourceDescriptor("s", ["ue/*/status"]), handler)
    q = KnowledgeQuery("ue/1/status")
    first = router.query_cached(q)
    second = router.query_cached(q)
    assert first.from_cache is False
    assert second.from_cache is True
    assert second.payload == first.payload
    assert len(calls) == 1


def test_cache_invalidated_by_version_bump():
    version = VersionCounter()
    router = KnowledgeRouter(version_source=version)
    router.register_source(SourceDescriptor("s", ["ue/*/status"]),
                           lambda q: {"v": version.value})
    q = KnowledgeQuery("ue/1/status")
    assert router.query_cached(q).payload == {"v": 0}
    version.value += 1
    result = router.query_cached(q)
    assert result.from_cache is False
    assert result.payload == {"v": 1}


def test_cache_distinguishes_params():
    version = VersionCounter()
    router = KnowledgeRouter(version_source=version)
    router.register_source(SourceDescriptor("s", ["ue/*/history"]),
                           lambda q: {"window": q.params.get("window", "all")})
    a = router.query_cached(KnowledgeQuery("ue/1/history", params={"window": "5"}))
    b = router.query_cached(KnowledgeQuery("ue/1/history", params={"window": "9"}))
    assert a.payload != b.payload
    assert b.from_cache is False


def test_cached_payload_mutation_does_not_poison_cache():
    version = VersionCounter()
    router = KnowledgeRouter(version_source=version)
    router.register_source(SourceDescriptor("s", ["cell/*/kpi"]),
                           lambda q: {"inner": {"x": 1}})
    q = KnowledgeQuery("cell/2/kpi")
    first = router.query_cached(q)
    first.payload["inner"]["x"] = 999
    assert router.query_cached(q).payload == {"inner": {"x": 1}}


def test_cache_coherence_against_recomputation():
    # mixed query/bump sequence; every answer must equal an uncached recompute
    rng = random.Random(77)
    version = VersionCounter()
    state = {"counter": 0}
    cached = KnowledgeRouter(version_source=version)
    plain = KnowledgeRouter(version_source=version)
    for router in (cached, plain):
        router.register_source(
            SourceDescriptor("s", ["ue/*/status", "cell/*/load"]),
            lambda q: {"path": q.path, "value": state["counter"]})
    for _ in range(500):
        op = rng.random()
        if op < 0.2:
            version.value += 1
            state["counter"] += rng.randint(1, 3)
        path = rng.choice(["ue/1/status", "ue/2/status", "cell/1/load"])
        q = KnowledgeQuery(path)
        assert cached.query_cached(q).payload == plain.route(q).payload


# --- history ---

def test_history_window():
    router = KnowledgeRouter()
    for t in range(1, 6):
        router.record_history("ue/3", t, {"tick": t})
    got = router.get_history("ue/3", window=3)
    assert [r.tick for r in got] == [3, 4, 5]


def test_history_ring_depth():
    router = KnowledgeRouter(history_depth=1000)
    for t in range(1, 1501):
        router.record_history("cell/1", t, {"tick": t})
    got = router.get_history("cell/1", window=10_000)
    assert got[0].tick == 501
    assert got[-1].tick == 1500
    assert len(got) == 1000


def test_history_unknown_entity():
    router = KnowledgeRouter()
    with pytest.raises(UnknownEntity):
        router.get_history("ue/99", window=5)


def test_history_requires_increasing_ticks():
    router = KnowledgeRouter()
    router.record_history("ue/1", 5, {})
    with pytest.raises(ValueError):
        router.record_history("ue/1", 5, {})


def test_history_strictly_ordered():
    router = KnowledgeRouter()
    rng = random.Random(3)
    tick = 0
    for _ in range(200):
        tick += rng.randint(1, 4)
        router.record_history("bs/1", tick, {"t": tick})
    got = router.get_history("bs/1", window=tick)
    assert all(a.tick < b.tick for a, b in zip(got, got[1:]))
