"""Discrete-tick AI-RAN emulator."""

from airan.sim.config import SimConfig, build_world
from airan.sim.handover import check_handover
from airan.sim.radio import compute_rsrp, compute_sinr
from airan.sim.rrm import allocate_prbs
from airan.sim.step import step
from airan.sim.types import (BaseStation, Cell, EventKind, HandoverDecision,
                             NetworkEvent, SignalReport, Slice, TickReport, UE,
                             World)

__all__ = [
    "BaseStation", "Cell", "EventKind", "HandoverDecision", "NetworkEvent",
    "SignalReport", "SimConfig", "Slice", "TickReport", "UE", "World",
    "allocate_prbs", "build_world", "check_handover", "compute_rsrp",
    "compute_sinr", "step",
]
