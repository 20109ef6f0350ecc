"""Command line entry points.

airan serve  --config FILE [--host H] [--port P]
airan sim    run --config FILE --ticks N --out events.jsonl
airan eval   run [--suite FILE] [--backend scripted|heuristic|remote]
                 [--script FILE] [--out report.json] [--workers N]
airan report render report.json
"""

from __future__ import annotations

import argparse
import json
import socket
import sys
import time
from pathlib import Path


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 2
    return args.func(args)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="airan")
    sub = parser.add_subparsers(dest="command")
    parser.set_defaults(command=None)

    serve = sub.add_parser("serve", help="run the HTTP gateway")
    serve.add_argument("--config", help="gateway config JSON")
    serve.add_argument("--host", default=None)
    serve.add_argument("--port", type=int, default=None)
    serve.set_defaults(func=_cmd_serve)

    sim = sub.add_parser("sim", help="simulator utilities")
    sim_sub = sim.add_subparsers(dest="subcommand", required=True)
    sim_run = sim_sub.add_parser("run", help="advance a fresh world and log ticks")
    sim_run.add_argument("--config", help="sim config JSON "
                         '({"config": name-or-dict, "seed", "warmup_ticks"})')
    sim_run.add_argument("--ticks", type=int, required=True)
    sim_run.add_argument("--out", required=True, help="JSONL output path")
    sim_run.set_defaults(func=_cmd_sim_run)

    ev = sub.add_parser("eval", help="evaluation suite runner")
    ev_sub = ev.add_subparsers(dest="subcommand", required=True)
    ev_run = ev_sub.add_parser("run", help="score a backend against a suite")
    ev_run.add_argument("--suite", default=None, help="scenario file "
                        "(default: the shipped 50-scenario suite)")
    ev_run.add_argument("--backend", default="scripted",
                        choices=("scripted", "heuristic", "remote"))
    ev_run.add_argument("--script", default=None,
                        help="replay script for --backend scripted")
    ev_run.add_argument("--out", default="report.json")
    ev_run.add_argument("--workers", type=int, default=1,
                        help="scenario parallelism")
    ev_run.set_defaults(func=_cmd_eval_run)

    rep = sub.add_parser("report", help="report utilities")
    rep_sub = rep.add_subparsers(dest="subcommand", required=True)
    rep_render = rep_sub.add_parser("render", help="print a report as a table")
    rep_render.add_argument("path")
    rep_render.set_defaults(func=_cmd_report_render)

    return parser


def _cmd_serve(args) -> int:
    from airan.gateway import ServeConfig, create_app

    config = ServeConfig.load(args.config) if args.config else ServeConfig()
    if args.host is not None:
        config.host = args.host
    if args.port is not None:
        config.port = args.port

    # claim the port up front so a conflict is a clean fatal error
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((config.host, config.port))
    except OSError as exc:
        print(f"cannot bind {config.host}:{config.port}: {exc}",
              file=sys.stderr)
        return 1
    finally:
        probe.close()

    import uvicorn

    app = create_app(config)
    print(f"listening on http://{config.host}:{config.port}")
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    return 0


def _cmd_sim_run(args) -> int:
    from airan.gateway import build_world

    sim = {}
    if args.config:
        with open(args.config) as fh:
            sim = json.load(fh)
    if args.ticks < 1:
        print("--ticks must be positive", file=sys.stderr)
        return 2
    testbed = build_world(sim)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    world = testbed.world
    with open(out, "w") as fh:
        for _ in range(args.ticks):
            reports = testbed.tick(1)
            line = {
                "tick": world.tick,
                "state_version": world.state_version,
                "cell_load": {str(cid): world.cells[cid].load
                              for cid in sorted(world.cells)},
                "serving": {str(uid): world.ues[uid].serving_cell
                            for uid in sorted(world.ues)},
                "events": [e.kind.value if hasattr(e.kind, "value") else str(e.kind)
                           for e in reports[0].events],
            }
            fh.write(json.dumps(line, sort_keys=True) + "\n")
    print(f"wrote {args.ticks} tick events to {out}")
    return 0


def _cmd_eval_run(args) -> int:
    from airan.gateway import DEFAULT_SUITE, make_chat_backend
    from airan.hatte.aggregate import aggregate
    from airan.hatte.report import render_table, write_report
    from airan.hatte.runner import run_scenario
    from airan.hatte.schema import load_scenarios
    from airan.errors import SchemaError

    suite = args.suite or str(DEFAULT_SUITE)
    try:
        scenarios = load_scenarios(suite)
    except SchemaError as exc:
        print(f"suite rejected: {exc}", file=sys.stderr)
        return 1
    backend = make_chat_backend(args.backend, args.script)

    started = time.perf_counter()
    if args.workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            traces = list(pool.map(lambda sc: run_scenario(sc, backend),
                                   scenarios))
    else:
        traces = [run_scenario(sc, backend) for sc in scenarios]
    wall = time.perf_counter() - started

    report = aggregate(traces)
    write_report(report, args.out, wall_time=wall)
    print(render_table(report), end="")
    print(f"wall time {wall:.2f}s, mean turn latency "
          f"{report.mean_latency * 1000:.2f} ms")
    print(f"report written to {args.out}")
    return 0


def _cmd_report_render(args) -> int:
    from airan.hatte.aggregate import EvaluationReport
    from airan.hatte.report import render_table

    with open(args.path) as fh:
        doc = json.load(fh)
    try:
        report = EvaluationReport(**doc)
    except TypeError as exc:
        print(f"not a report file: {exc}", file=sys.stderr)
        return 1
    print(render_table(report), end="")
    return 0


if __name__ == "__main__":
    sys.exit(main())
