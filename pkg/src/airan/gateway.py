"""HTTP surface over one interactive world: sessions, streamed chat turns,
simulator control, and evaluation jobs.

Chat turns stream as newline-delimited JSON frames, one TurnEvent per line,
with contiguous sequence numbers; the finished turn is appended to the
session's JSONL trace. Evaluation jobs run on a bounded thread pool with a
private world per scenario, so the interactive world never observes them.
"""

from __future__ import annotations

import json
import os
import queue
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, StreamingResponse

from airan.agents.backends import HeuristicBackend, RemoteBackend, ReplayBackend
from airan.agents.pipeline import run_turn
from airan.agents.types import ConversationSession, PERSONAS, USER
from airan.errors import (AiranError, NotRouted, SchemaError, UnknownEntity,
                          UnknownService)
from airan.hatte.aggregate import aggregate
from airan.hatte.report import write_report
from airan.hatte.runner import run_scenario
from airan.hatte.schema import load_scenarios
from airan.sim.config import SimConfig
from airan.testbed import Testbed, default_config
from airan.tools import build_registry

DATA_DIR = Path(__file__).resolve().parent / "data"
DEFAULT_SUITE = DATA_DIR / "suite_50.json"
DEFAULT_SCRIPT = DATA_DIR / "perfect_script.json"

EVENT_KINDS = ("intent", "plan_step", "tool_call", "tool_result",
               "final_text", "metrics")

JOB_QUEUED = "queued"
JOB_RUNNING = "running"
JOB_DONE = "done"
JOB_FAILED = "failed"


@dataclass
class ServeConfig:
    host: str = "127.0.0.1"
    port: int = 8420
    sim: dict = field(default_factory=dict)
    trace_dir: str = "traces"
    chat_backend: str = "heuristic"  # heuristic | scripted | remote
    script: str | None = None
    eval_workers: int = 0  # 0 means cpu count

    @classmethod
    def load(cls, path: str | Path) -> "ServeConfig":
        with open(path) as fh:
            raw = json.load(fh)
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**raw)


def build_world(sim: dict) -> Testbed:
    """Same shape as a scenario's sim_config: {"config": name-or-dict,
    "seed", "warmup_ticks"}."""
    conf = sim.get("config", "desk_base")
    config = default_config() if isinstance(conf, str) else SimConfig.from_dict(conf)
    testbed = Testbed(config, seed=int(sim.get("seed", 0)))
    warmup = int(sim.get("warmup_ticks", 0))
    if warmup:
        testbed.tick(warmup)
    return testbed


def make_chat_backend(kind: str, script: str | Path | None = None):
    if kind == "heuristic":
        return HeuristicBackend()
    if kind == "scripted":
        with open(script or DEFAULT_SCRIPT) as fh:
            return ReplayBackend(json.load(fh))
    if kind == "remote":
        return RemoteBackend()
    raise ValueError(f"unknown backend kind {kind!r}")


def turn_from_events(events: list[dict]) -> dict:
    """Rebuild a turn record from its streamed frames.

    The inverse of the pipeline's event emission; used to check the
    stream/persistence consistency guarantee.
    """
    record = {"utterance": None, "intent": None,
              "plan": {"steps": [], "notes": []},
              "tool_calls": [], "response": {"text": None, "claims": []},
              "latency": None, "error": None}
    calls: dict[str, dict] = {}
    for event in events:
        kind, payload = event["kind"], event["payload"]
        if kind == "intent":
            record["utterance"] = payload["utterance"]
            record["intent"] = payload["intent"]
        elif kind == "plan_step":
            record["plan"]["steps"].append(
                {"description": payload["description"],
                 "tool_family": payload["tool_family"],
                 "binding": payload["binding"]})
        elif kind == "tool_call":
            calls[payload["id"]] = {
                "id": payload["id"], "tool": payload["tool"],
                "params": payload["params"], "result": None,
                "issued_at_step": payload["issued_at_step"]}
            record["tool_calls"].append(calls[payload["id"]])
        elif kind == "tool_result":
            calls[payload["id"]]["result"] = payload["result"]
        elif kind == "final_text":
            record["response"]["text"] = payload["text"]
            record["response"]["claims"] = payload["claims"]
        elif kind == "metrics":
            record["latency"] = payload["latency"]
            record["error"] = payload["error"]
            record["plan"]["notes"] = payload["notes"]
    return record


class Gateway:
    """Owns the interactive world, session registry, and eval job pool."""

    def __init__(self, config: ServeConfig | None = None):
        self.config = config or ServeConfig()
        self.testbed = build_world(self.config.sim)
        self.registry = build_registry(self.testbed)
        self.chat_backend = make_chat_backend(self.config.chat_backend,
                                              self.config.script)
        self.trace_dir = Path(self.config.trace_dir)
        self.trace_dir.mkdir(parents=True, exist_ok=True)

        self.sessions: dict[str, ConversationSession] = {}
        self.session_meta: dict[str, dict] = {}
        self._turn_locks: dict[str, threading.Lock] = {}
        self.jobs: dict[str, dict] = {}
        self._lock = threading.Lock()
        self._counter = 0
        workers = self.config.eval_workers or os.cpu_count() or 1
        self._pool = ThreadPoolExecutor(max_workers=workers)

    def _next_id(self, prefix: str) -> str:
        with self._lock:
            self._counter += 1
            return f"{prefix}{self._counter}"

    # --- sessions ---

    def create_session(self, persona: str) -> dict:
        sid = self._next_id("s")
        session = ConversationSession(id=sid, persona=persona,
                                      testbed=self.testbed)
        meta = {"id": sid, "persona": persona,
                "created_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
                "world": "interactive"}
        self.sessions[sid] = session
        self.session_meta[sid] = meta
        self._turn_locks[sid] = threading.Lock()
        return meta

    def trace_path(self, sid: str) -> Path:
        return self.trace_dir / f"{sid}.jsonl"

    def persist_turn(self, sid: str, turn) -> None:
        with open(self.trace_path(sid), "a") as fh:
            fh.write(json.dumps(turn.to_record(), sort_keys=True) + "\n")

    # --- eval jobs ---

    def submit_job(self, suite: str | Path, backend_kind: str,
                   script: str | Path | None = None,
                   workers: int = 1) -> dict:
        job_id = self._next_id("job")
        job = {"id": job_id, "suite": str(suite), "backend": backend_kind,
               "status": JOB_QUEUED, "error": None,
               "report_path": str(self.trace_dir / f"{job_id}.report.json")}
        self.jobs[job_id] = job
        self._pool.submit(self._run_job, job, script, workers)
        return job

    def _run_job(self, job: dict, script: str | Path | None,
                 workers: int) -> None:
        job["status"] = JOB_RUNNING
        started = time.perf_counter()
        try:
            scenarios = load_scenarios(job["suite"])
            backend = make_chat_backend(job["backend"], script)
            if workers > 1:
                with ThreadPoolExecutor(max_workers=workers) as pool:
                    traces = list(pool.map(
                        lambda sc: run_scenario(sc, backend), scenarios))
            else:
                traces = [run_scenario(sc, backend) for sc in scenarios]
            report = aggregate(traces)
            write_report(report, job["report_path"],
                         wall_time=time.perf_counter() - started)
            trace_file = self.trace_dir / f"{job['id']}.turns.jsonl"
            with open(trace_file, "w") as fh:
                for trace in traces:
                    for turn in trace.session.turns:
                        fh.write(json.dumps(
                            {"scenario_id": trace.scenario_id,
                             "turn": turn.to_record()}, sort_keys=True) + "\n")
            job["status"] = JOB_DONE
        except SchemaError as exc:
            job["status"] = JOB_FAILED
            job["error"] = str(exc)
        except Exception as exc:
            job["status"] = JOB_FAILED
            job["error"] = f"{type(exc).__name__}: {exc}"


def _error_body(exc_type: str, message: str) -> dict:
    return {"error": {"type": exc_type, "message": message}}


def create_app(config: ServeConfig | None = None) -> FastAPI:
    gateway = Gateway(config)
    app = FastAPI(title="airan gateway", docs_url=None, redoc_url=None)
    app.state.gateway = gateway

    @app.get("/healthz")
    def healthz():
        world = gateway.testbed.world
        return {"status": "ok", "tick": world.tick,
                "state_version": world.state_version}

    @app.get("/state/{path:path}")
    def state(path: str, request: Request):
        params = dict(request.query_params) or None
        try:
            result = gateway.testbed.query(path, params)
        except (NotRouted, UnknownEntity, UnknownService, KeyError) as exc:
            return JSONResponse(status_code=404, content=_error_body(
                type(exc).__name__, str(exc)))
        except (AiranError, ValueError) as exc:
            return JSONResponse(status_code=400, content=_error_body(
                type(exc).__name__, str(exc)))
        return {"path": path, "payload": result.payload,
                "state_version": result.state_version,
                "from_cache": result.from_cache}

    @app.post("/sessions")
    async def create_session(request: Request):
        body = await _json_body(request)
        persona = body.get("persona", USER)
        if persona not in PERSONAS:
            return JSONResponse(status_code=400, content=_error_body(
                "InvalidPersona", f"persona must be one of {PERSONAS}"))
        return gateway.create_session(persona)

    @app.post("/sessions/{sid}/message")
    async def message(sid: str, request: Request):
        body = await _json_body(request)
        session = gateway.sessions.get(sid)
        if session is None:
            return JSONResponse(status_code=404, content=_error_body(
                "UnknownSession", f"no session {sid!r}"))
        text = body.get("text", "")
        if not isinstance(text, str) or not text.strip():
            return JSONResponse(status_code=400, content=_error_body(
                "EmptyUtterance", "message text is required"))
        lock = gateway._turn_locks[sid]
        if not lock.acquire(blocking=False):
            return JSONResponse(status_code=409, content=_error_body(
                "TurnInFlight", f"session {sid!r} already has a turn running"))

        def frames():
            events: "queue.Queue" = queue.Queue()
            done = object()

            def work():
                try:
                    run_turn(session, text, gateway.chat_backend,
                             gateway.registry, scenario_id=sid,
                             emit=lambda kind, payload: events.put(
                                 (kind, payload)))
                except Exception as exc:  # classify failures reach here
                    events.put(("metrics", {
                        "latency": 0.0, "error": f"{type(exc).__name__}: {exc}",
                        "notes": [], "steps": 0, "claims": 0,
                        "grounded_claims": 0}))
                    events.put(("final_text", {
                        "text": "I hit an internal error handling that.",
                        "claims": [], "is_error": True}))
                finally:
                    events.put(done)

            worker = threading.Thread(target=work, daemon=True)
            before = len(session.turns)
            worker.start()
            seq = 0
            try:
                while True:
                    item = events.get()
                    if item is done:
                        break
                    kind, payload = item
                    yield json.dumps({"seq": seq, "kind": kind,
                                      "payload": payload},
                                     sort_keys=True) + "\n"
                    seq += 1
                worker.join()
                if len(session.turns) > before:
                    gateway.persist_turn(sid, session.turns[-1])
            finally:
                lock.release()

        return StreamingResponse(frames(), media_type="application/x-ndjson")

    @app.post("/sim/tick")
    async def sim_tick(request: Request):
        body = await _json_body(request)
        try:
            payload = gateway.registry.invoke("sim.tick",
                                              {"n": body.get("n", 1)})
        except (AiranError, ValueError, TypeError) as exc:
            return JSONResponse(status_code=400, content=_error_body(
                type(exc).__name__, str(exc)))
        return payload

    @app.post("/eval/jobs")
    async def create_job(request: Request):
        body = await _json_body(request)
        backend_kind = body.get("backend", "scripted")
        if backend_kind not in ("scripted", "heuristic", "remote"):
            return JSONResponse(status_code=400, content=_error_body(
                "InvalidBackend", f"unknown backend {backend_kind!r}"))
        suite = body.get("suite", str(DEFAULT_SUITE))
        if not Path(suite).exists():
            return JSONResponse(status_code=400, content=_error_body(
                "MissingSuite", f"suite file {suite!r} not found"))
        job = gateway.submit_job(
            suite, backend_kind, script=body.get("script"),
            workers=int(body.get("workers", 1)))
        return JSONResponse(status_code=202, content=job)

    @app.get("/eval/jobs/{job_id}")
    def job_status(job_id: str):
        job = gateway.jobs.get(job_id)
        if job is None:
            return JSONResponse(status_code=404, content=_error_body(
                "UnknownJob", f"no job {job_id!r}"))
        return job

    @app.get("/eval/jobs/{job_id}/report")
    def job_report(job_id: str):
        job = gateway.jobs.get(job_id)
        if job is None:
            return JSONResponse(status_code=404, content=_error_body(
                "UnknownJob", f"no job {job_id!r}"))
        if job["status"] != JOB_DONE:
            return JSONResponse(status_code=409, content=_error_body(
                "JobNotDone", f"job is {job['status']}"
                + (f": {job['error']}" if job["error"] else "")))
        with open(job["report_path"]) as fh:
            return json.load(fh)

    return app


async def _json_body(request: Request) -> dict:
    try:
        body = await request.json()
    except Exception:
        return {}
    return body if isinstance(body, dict) else {}


__all__ = ["Gateway", "ServeConfig", "build_world", "create_app",
           "make_chat_backend", "turn_from_events", "DEFAULT_SUITE",
           "DEFAULT_SCRIPT", "EVENT_KINDS"]
