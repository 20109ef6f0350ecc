"""SimConfig parsing and deterministic World construction."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path

from airan.sim import radio
from airan.sim.types import BaseStation, Cell, EventKind, NetworkEvent, Slice, UE, World


@dataclass
class CellPlacement:
    id: int
    position: tuple[float, float]
    tx_power: float = 43.0
    prb_capacity: int = 100
    base_station: int | None = None  # default: one base station per cell


@dataclass
class SimConfig:
    arena: tuple[float, float] = (600.0, 600.0)
    cells: list[CellPlacement] = field(default_factory=list)
    ue_count: int = 12
    velocity_range: tuple[float, float] = (0.5, 2.5)  # m/s magnitude
    demand_range: tuple[int, int] = (2, 12)  # PRBs per tick
    seed: int = 42
    tick_seconds: float = 1.0
    pathloss: dict = field(default_factory=lambda: {
        "d0": radio.DEFAULT_D0, "L0": radio.DEFAULT_L0, "n": radio.DEFAULT_N})
    handover: dict = field(default_factory=lambda: {"hysteresis_db": 3.0, "ttt_ticks": 3})
    noise_floor_dbm: float = -104.0
    slices: list[dict] = field(default_factory=lambda: [{"id": "default", "name": "Default slice"}])
    edge_servers: list[dict] = field(default_factory=list)  # default: one per base station

    def __post_init__(self):
        self.cells = [
            c if isinstance(c, CellPlacement) else CellPlacement(
                id=int(c["id"]),
                position=(float(c["position"][0]), float(c["position"][1])),
                tx_power=float(c.get("tx_power", 43.0)),
                prb_capacity=int(c.get("prb_capacity", 100)),
                base_station=c.get("base_station"),
            )
            for c in self.cells
        ]

    @classmethod
    def from_dict(cls, raw: dict) -> "SimConfig":
        cfg = cls()
        if "arena" in raw:
            cfg.arena = (float(raw["arena"][0]), float(raw["arena"][1]))
        cfg.cells = [
            CellPlacement(
                id=int(c["id"]),
                position=(float(c["position"][0]), float(c["position"][1])),
                tx_power=float(c.get("tx_power", 43.0)),
                prb_capacity=int(c.get("prb_capacity", 100)),
                base_station=c.get("base_station"),
            )
            for c in raw.get("cells", [])
        ]
        cfg.ue_count = int(raw.get("ue_count", cfg.ue_count))
        if "velocity_range" in raw:
            cfg.velocity_range = (float(raw["velocity_range"][0]), float(raw["velocity_range"][1]))
        if "demand_range" in raw:
            cfg.demand_range = (int(raw["demand_range"][0]), int(raw["demand_range"][1]))
        cfg.seed = int(raw.get("seed", cfg.seed))
        cfg.tick_seconds = float(raw.get("tick_seconds", cfg.tick_seconds))
        cfg.pathloss.update(raw.get("pathloss", {}))
        cfg.handover.update(raw.get("handover", {}))
        cfg.noise_floor_dbm = float(raw.get("noise_floor_dbm", cfg.noise_floor_dbm))
        if "slices" in raw:
            cfg.slices = list(raw["slices"])
        if "edge_servers" in raw:
            cfg.edge_servers = list(raw["edge_servers"])
        return cfg

    @classmethod
    def load(cls, path: str | Path) -> "SimConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def build_world(config: SimConfig, seed: int | None = None):
    """Create a World plus its bootstrap UEAttached events.

    Identical (config, seed) pairs produce identical worlds. Each UE is
    admitted to a slice (round-robin over the configured slices, a no-op
    admission check) and attaches to the strongest cell at its spawn point.
    """
    if not config.cells:
        raise ValueError("config needs at least one cell")
    rng = random.Random(config.seed if seed is None else seed)

    base_stations: dict[int, BaseStation] = {}
    cells: dict[int, Cell] = {}
    for placement in config.cells:
        bs_id = placement.base_station if placement.base_station is not None else placement.id
        bs = base_stations.setdefault(bs_id, BaseStation(id=bs_id, position=placement.position))
        bs.cell_ids.append(placement.id)
        cells[placement.id] = Cell(
            id=placement.id,
            base_station=bs_id,
            position=placement.position,
            tx_power=placement.tx_power,
            prb_capacity=placement.prb_capacity,
        )

    slices = {s["id"]: Slice(id=s["id"], name=s.get("name", s["id"])) for s in config.slices}
    slice_ids = list(slices)

    pl = config.pathloss
    world = World(
        tick=0,
        tick_seconds=config.tick_seconds,
        arena=config.arena,
        ues={},
        cells=cells,
        base_stations=base_stations,
        slices=slices,
        rng_seed=config.seed if seed is None else seed,
        rng=rng,
        pathloss_d0=float(pl["d0"]),
        pathloss_l0=float(pl["L0"]),
        pathloss_n=float(pl["n"]),
        noise_floor_dbm=config.noise_floor_dbm,
        hysteresis_db=float(config.handover["hysteresis_db"]),
        ttt_ticks=int(config.handover["ttt_ticks"]),
    )

    events: list[NetworkEvent] = []
    sorted_cell_ids = sorted(cells)
    for ue_id in range(config.ue_count):
        pos = (rng.uniform(0.0, config.arena[0]), rng.uniform(0.0, config.arena[1]))
        speed = rng.uniform(*config.velocity_range)
        heading = rng.uniform(0.0, 2.0 * math.pi)
        vel = (speed * math.cos(heading), speed * math.sin(heading))
        demand = rng.randint(config.demand_range[0], config.demand_range[1])
        best_cell = max(
            sorted_cell_ids,
            key=lambda cid: (radio.compute_rsrp(cells[cid], pos, world.pathloss_d0,
                                                world.pathloss_l0, world.pathloss_n), -cid),
        )
        slice_id = slice_ids[ue_id % len(slice_ids)]
        ue = UE(id=ue_id, position=pos, velocity=vel, serving_cell=best_cell,
                traffic_demand=demand, slice_id=slice_id)
        world.ues[ue_id] = ue
        slices[slice_id].admitted_ues.add(ue_id)
        events.append(NetworkEvent(
            kind=EventKind.UE_ATTACHED,
            payload={"ue_id": ue_id, "cell_id": best_cell, "slice_id": slice_id},
            tick=0,
        ))

    world.bump_version()
    world.validate()
    return world, events
