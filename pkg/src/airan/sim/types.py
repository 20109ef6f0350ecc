"""Domain types for the AI-RAN emulator."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum


class EventKind(Enum):
    UE_ATTACHED = "UEAttached"
    HANDOVER_EXECUTED = "HandoverExecuted"
    CELL_LOAD_CHANGED = "CellLoadChanged"
    TICK_COMPLETED = "TickCompleted"
    AI_SERVICE_EVENT = "AIServiceEvent"


@dataclass
class NetworkEvent:
    kind: EventKind
    payload: dict
    tick: int

    def to_record(self) -> dict:
        return {"kind": self.kind.value, "tick": self.tick, "payload": self.payload}


@dataclass
class SignalReport:
    cell_id: int
    rsrp: float  # dBm
    sinr: float  # dB
    tick: int


@dataclass
class UE:
    id: int
    position: tuple[float, float]
    velocity: tuple[float, float]
    serving_cell: int
    traffic_demand: int  # PRBs requested per tick
    slice_id: str
    measurement: dict[int, SignalReport] = field(default_factory=dict)
    allocated_prbs: int = 0
    # A3 time-to-trigger counters, one per neighbour cell
    a3_timers: dict[int, int] = field(default_factory=dict)


@dataclass
class Cell:
    id: int
    base_station: int
    position: tuple[float, float]
    tx_power: float  # dBm
    prb_capacity: int
    load: float = 0.0


@dataclass
class BaseStation:
    id: int
    position: tuple[float, float]
    cell_ids: list[int] = field(default_factory=list)


@dataclass
class Slice:
    id: str
    name: str
    admitted_ues: set[int] = field(default_factory=set)


@dataclass
class HandoverDecision:
    ue_id: int
    source_cell: int
    target_cell: int


@dataclass
class TickReport:
    tick: int
    events: list[NetworkEvent]


@dataclass
class World:
    """Full simulator state; the single source of ground truth.

    Mutated only by step() and explicit control operations. state_version
    strictly increases across every mutating operation.
    """

    tick: int
    tick_seconds: float
    arena: tuple[float, float]
    ues: dict[int, UE]
    cells: dict[int, Cell]
    base_stations: dict[int, BaseStation]
    slices: dict[str, Slice]
    rng_seed: int
    rng: random.Random
    state_version: int = 0
    # radio parameters
    pathloss_d0: float = 1.0
    pathloss_l0: float = 32.45
    pathloss_n: float = 3.5
    noise_floor_dbm: float = -104.0
    hysteresis_db: float = 3.0
    ttt_ticks: int = 3
    # ticks since the last handover, per UE (guards against ping-pong)
    last_handover_tick: dict[int, int] = field(default_factory=dict)
    # edge server ids living in the edge-ai module
    edge_servers: list[str] = field(default_factory=list)

    def bump_version(self) -> int:
        self.state_version += 1
        return self.state_version

    def validate(self) -> None:
        for ue in self.ues.values():
            if ue.serving_cell not in self.cells:
                raise ValueError(f"UE {ue.id} serves unknown cell {ue.serving_cell}")
            if ue.traffic_demand < 0:
                raise ValueError(f"UE {ue.id} has negative traffic demand")
        for cell in self.cells.values():
            if cell.base_station not in self.base_stations:
                raise ValueError(f"cell {cell.id} on unknown base station")
            if cell.prb_capacity <= 0:
                raise ValueError(f"cell {cell.id} has non-positive PRB capacity")
            if not 0.0 <= cell.load <= 1.0:
                raise ValueError(f"cell {cell.id} load out of range")
        seen: set[int] = set()
        for sl in self.slices.values():
            overlap = seen & sl.admitted_ues
            if overlap:
                raise ValueError(f"UEs {sorted(overlap)} admitted to multiple slices")
            seen |= sl.admitted_ues
