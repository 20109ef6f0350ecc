"""One simulation tick, in fixed phase order:

(1) move UEs (constant velocity, reflective arena boundary),
(2) recompute SignalReports for every UE-cell pair (bulk kernel),
(3) A3 handover check per UE, decisions applied immediately,
(4) PRB allocation per cell, loads updated,
(5) events emitted, state_version bumped, tick advanced.
"""

from __future__ import annotations

from array import array

from airan.sim import kernels
from airan.sim.handover import check_handover
from airan.sim.rrm import allocate_prbs
from airan.sim.types import (EventKind, NetworkEvent, SignalReport, TickReport,
                             World)


def _reflect(value: float, velocity: float, limit: float) -> tuple[float, float]:
    if value < 0.0:
        return -value, -velocity
    if value > limit:
        return 2.0 * limit - value, -velocity
    return value, velocity


def step(world: World) -> TickReport:
    tick = world.tick + 1
    events: list[NetworkEvent] = []
    ue_ids = sorted(world.ues)
    cell_ids = sorted(world.cells)

    # phase 1: mobility
    dt = world.tick_seconds
    for uid in ue_ids:
        ue = world.ues[uid]
        x, y = ue.position
        vx, vy = ue.velocity
        x, vx = _reflect(x + vx * dt, vx, world.arena[0])
        y, vy = _reflect(y + vy * dt, vy, world.arena[1])
        ue.position = (x, y)
        ue.velocity = (vx, vy)

    # phase 2: measurements (bulk kernel over all UE-cell pairs)
    n_ue, n_cell = len(ue_ids), len(cell_ids)
    if n_ue:
        ue_x = array("d", (world.ues[u].position[0] for u in ue_ids))
        ue_y = array("d", (world.ues[u].position[1] for u in ue_ids))
        cx = array("d", (world.cells[c].position[0] for c in cell_ids))
        cy = array("d", (world.cells[c].position[1] for c in cell_ids))
        tx = array("d", (world.cells[c].tx_power for c in cell_ids))
        noise_mw = 10.0 ** (world.noise_floor_dbm / 10.0)
        rsrp = array("d", bytes(8 * n_ue * n_cell))
        sinr = array("d", bytes(8 * n_ue * n_cell))
        kernels.measure(ue_x, ue_y, cx, cy, tx, noise_mw,
                        world.pathloss_d0, world.pathloss_l0, world.pathloss_n,
                        rsrp, sinr)
        for i, uid in enumerate(ue_ids):
            ue = world.ues[uid]
            ue.measurement = {
                cid: SignalReport(cell_id=cid, rsrp=rsrp[i * n_cell + j],
                                  sinr=sinr[i * n_cell + j], tick=tick)
                for j, cid in enumerate(cell_ids)
            }

    # phase 3: handover
    for uid in ue_ids:
        ue = world.ues[uid]
        decision = check_handover(
            list(ue.measurement.values()), ue.serving_cell,
            world.hysteresis_db, world.ttt_ticks, ue.a3_timers, ue_id=uid)
        if decision is not None:
            ue.serving_cell = decision.target_cell
            ue.a3_timers = {}
            world.last_handover_tick[uid] = tick
            events.append(NetworkEvent(
                kind=EventKind.HANDOVER_EXECUTED,
                payload={"ue_id": uid, "source_cell": decision.source_cell,
                         "target_cell": decision.target_cell, "cause": "a3"},
                tick=tick))

    # phase 4: PRB allocation per cell
    for cid in cell_ids:
        cell = world.cells[cid]
        demands = {uid: world.ues[uid].traffic_demand
                   for uid in ue_ids if world.ues[uid].serving_cell == cid}
        allocation = allocate_prbs(cell.prb_capacity, demands) if demands else {}
        for uid in ue_ids:
            if world.ues[uid].serving_cell == cid:
                world.ues[uid].allocated_prbs = allocation.get(uid, 0)
        new_load = sum(allocation.values()) / cell.prb_capacity
        if new_load != cell.load:
            cell.load = new_load
            events.append(NetworkEvent(
                kind=EventKind.CELL_LOAD_CHANGED,
                payload={"cell_id": cid, "load": new_load,
                         "allocated": sum(allocation.values()),
                         "demand": sum(demands.values())},
                tick=tick))

    # phase 5: finalize
    world.tick = tick
    version = world.bump_version()
    events.append(NetworkEvent(
        kind=EventKind.TICK_COMPLETED,
        payload={"tick": tick, "state_version": version},
        tick=tick))
    return TickReport(tick=tick, events=events)
