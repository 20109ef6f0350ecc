"""Profiling, placement, and deployment ledger tests."""

import itertools
import random

import pytest

from airan.edge import (AXES, AIServiceSpec, Deployment, EdgeManager, EdgeServer,
                        PENDING, PULLING, RUNNING, TERMINATED, UserRequirement,
                        place_service, profile_requirements)
from airan.errors import (DeploymentBusy, InsufficientCapacity, NoMatchingService,
                          UnknownDeployment)


def svc(sid, modality="vision", cpu=1.0, gpu=0.5, mem=1024.0,
        latency="interactive", tier=3):
    return AIServiceSpec(id=sid, modality=modality, image_ref=f"registry/{sid}:1",
                         cpu_req=cpu, gpu_req=gpu, mem_req=mem,
                         latency_class=latency, accuracy_tier=tier)


def server(sid="e1", bs=1, cpu=8.0, gpu=2.0, mem=16384.0):
    return EdgeServer(id=sid, base_station=bs, cpu_capacity=cpu,
                      gpu_capacity=gpu, mem_capacity=mem)


# --- profiling ---

def test_singleton_catalog():
    catalog = [svc("v1")]
    req = UserRequirement("detect people", "vision")
    assert profile_requirements(req, catalog) == catalog


def test_no_matching_modality():
    with pytest.raises(NoMatchingService):
        profile_requirements(UserRequirement("chat", "nlp"), [svc("v1")])


def test_latency_filter_is_upper_bound():
    catalog = [svc("rt", latency="realtime"), svc("b", latency="batch")]
    got = profile_requirements(
        UserRequirement("x", "vision", max_latency_class="interactive"), catalog)
    assert [s.id for s in got] == ["rt"]


def test_accuracy_filter_is_lower_bound():
    catalog = [svc("lo", tier=2), svc("hi", tier=4)]
    got = profile_requirements(
        UserRequirement("x", "vision", min_accuracy_tier=3), catalog)
    assert [s.id for s in got] == ["hi"]


def test_higher_tier_ranks_first():
    catalog = [svc("t3", tier=3), svc("t4", tier=4)]
    got = profile_requirements(UserRequirement("x", "vision"), catalog)
    assert [s.id for s in got] == ["t4", "t3"]


def test_equal_tier_ranks_by_footprint_then_id():
    catalog = [
        svc("fat", tier=4, cpu=4.0, gpu=1.0, mem=8192.0),
        svc("slim", tier=4, cpu=1.0, gpu=0.25, mem=1024.0),
        svc("also-slim", tier=4, cpu=1.0, gpu=0.25, mem=1024.0),
    ]
    got = profile_requirements(UserRequirement("x", "vision"), catalog)
    assert [s.id for s in got] == ["also-slim", "slim", "fat"]


def test_recommendations_satisfy_all_filters():
    rng = random.Random(42)
    modality_pool = ["vision", "nlp", "predictive"]
    latency_pool = ["realtime", "interactive", "batch"]
    for _ in range(100):
        catalog = [
            svc(f"s{i}", modality=rng.choice(modality_pool),
                latency=rng.choice(latency_pool), tier=rng.randint(1, 5),
                cpu=rng.uniform(0.5, 4.0), gpu=rng.uniform(0.1, 1.5),
                mem=rng.uniform(256, 8192))
            for i in range(rng.randint(1, 10))
        ]
        req = UserRequirement("x", rng.choice(modality_pool),
                              max_latency_class=rng.choice(latency_pool),
                              min_accuracy_tier=rng.randint(1, 5))
        try:
            got = profile_requirements(req, catalog)
        except NoMatchingService:
            continue
        from airan.edge import LATENCY_ORDER
        for s in got:
            assert s.modality == req.modality
            assert LATENCY_ORDER[s.latency_class] <= LATENCY_ORDER[req.max_latency_class]
            assert s.accuracy_tier >= req.min_accuracy_tier


# --- placement ---

def test_single_server_with_room():
    assert place_service(svc("v1"), [server("only")]) == "only"


def test_no_server_fits():
    spec = svc("gpu-hog", gpu=8.0)
    with pytest.raises(InsufficientCapacity):
        place_service(spec, [server("e1"), server("e2")])


def test_prefers_least_loaded_server():
    a, b = server("a"), server("b")
    a.used["cpu"] = 6.0  # a would end up at (6+1)/8 = 0.875 cpu
    assert place_service(svc("v1"), [a, b]) == "b"


def test_tie_breaks_by_server_id():
    assert place_service(svc("v1"), [server("e2"), server("e1")]) == "e1"


def brute_force_place(spec, servers):
    feasible = []
    for s in servers:
        if not s.fits(spec):
            continue
        post = max((s.used[axis] + spec.requests()[axis]) / s.capacity(axis)
                   for axis in AXES)
        feasible.append((post, s.id))
    return min(feasible)[1] if feasible else None


def test_placement_matches_exhaustive_search():
    # every instance with <=5 servers x <=6 services, sequential placement
    rng = random.Random(99)
    for n_servers, n_services in itertools.product(range(1, 6), range(1, 7)):
        for trial in range(6):
            servers = [
                server(f"e{i}", cpu=rng.choice([4.0, 8.0, 16.0]),
                       gpu=rng.choice([1.0, 2.0, 4.0]),
                       mem=rng.choice([4096.0, 8192.0, 16384.0]))
                for i in range(n_servers)
            ]
            mgr = EdgeManager(pull_delay=0)
            for s in servers:
                mgr.add_server(s)
            for j in range(n_services):
                spec = svc(f"s{j}", cpu=rng.uniform(0.5, 6.0),
                           gpu=rng.uniform(0.1, 2.0), mem=rng.uniform(512, 6144))
                mgr.catalog.append(spec)
                expected = brute_force_place(spec, mgr.server_list())
                if expected is None:
                    with pytest.raises(InsufficientCapacity):
                        mgr.place(spec)
                else:
                    assert mgr.place(spec) == expected
                    mgr.deploy(spec, expected)


# --- deployment lifecycle ---

def test_pull_reaches_running_after_default_delay():
    mgr = EdgeManager(catalog=[svc("v1")])
    mgr.add_server(server())
    dep = mgr.deploy(mgr.get_service("v1"))
    assert dep.state == PENDING
    mgr.on_tick(1)
    assert dep.state == PULLING
    mgr.on_tick(2)
    assert dep.state == RUNNING


def test_zero_delay_runs_immediately():
    mgr = EdgeManager(catalog=[svc("v1")], pull_delay=0)
    mgr.add_server(server())
    assert mgr.deploy(mgr.get_service("v1")).state == RUNNING


def test_capacity_debited_at_pending():
    mgr = EdgeManager(catalog=[svc("big", gpu=1.5)])
    mgr.add_server(server(gpu=2.0))
    mgr.deploy(mgr.get_service("big"))
    with pytest.raises(InsufficientCapacity):
        mgr.deploy(mgr.get_service("big"))


def test_teardown_restores_capacity_exactly():
    mgr = EdgeManager(catalog=[svc("v1", cpu=2.0, gpu=0.5, mem=2048.0)])
    s = server()
    mgr.add_server(s)
    before = dict(s.used)
    dep = mgr.deploy(mgr.get_service("v1"))
    place_before = mgr.place(mgr.get_service("v1"))
    mgr.teardown(dep.id)
    assert s.used == before
    assert dep.state == TERMINATED
    # deploy -> teardown -> deploy lands in the same place
    dep2 = mgr.deploy(mgr.get_service("v1"))
    assert dep2.server_id == dep.server_id == place_before


def test_teardown_busy_deployment_refused():
    mgr = EdgeManager(catalog=[svc("v1")])
    mgr.add_server(server())
    dep = mgr.deploy(mgr.get_service("v1"))
    mgr.acquire(dep.id)
    with pytest.raises(DeploymentBusy):
        mgr.teardown(dep.id)
    mgr.release(dep.id)
    assert mgr.teardown(dep.id).state == TERMINATED


def test_teardown_unknown_deployment():
    mgr = EdgeManager()
    with pytest.raises(UnknownDeployment):
        mgr.teardown("d404")


def test_ledger_invariant_under_mixed_ops():
    rng = random.Random(5)
    mgr = EdgeManager(catalog=[svc(f"s{i}", cpu=rng.uniform(0.5, 3.0),
                                   gpu=rng.uniform(0.1, 0.9),
                                   mem=rng.uniform(256, 4096)) for i in range(6)])
    for i in range(3):
        mgr.add_server(server(f"e{i}"))
    live = []
    for step_no in range(200):
        if live and rng.random() < 0.4:
            dep = live.pop(rng.randrange(len(live)))
            mgr.teardown(dep.id)
        else:
            spec = mgr.catalog[rng.randrange(len(mgr.catalog))]
            try:
                live.append(mgr.deploy(spec))
            except InsufficientCapacity:
                pass
        mgr.on_tick(step_no)
        for srv in mgr.servers.values():
            for axis in AXES:
                expected = 0.0
                for d in sorted(srv.deployments):
                    if mgr.deployments[d].state != TERMINATED:
                        expected += mgr.deployments[d].requests[axis]
                assert srv.used[axis] == expected
                assert srv.used[axis] <= srv.capacity(axis) + 1e-9


def test_state_never_moves_backward():
    dep = Deployment(id="d1", service_id="s", server_id="e", state=RUNNING)
    with pytest.raises(ValueError):
        dep.advance_state(PENDING)
