"""A3-style handover rule: a neighbour must beat the serving cell's RSRP by
at least `hysteresis` dB for `time_to_trigger` consecutive ticks."""

from __future__ import annotations

from airan.sim.types import HandoverDecision, SignalReport


def check_handover(reports: list[SignalReport], serving: int,
                   hysteresis: float, time_to_trigger: int,
                   a3_timers: dict[int, int], ue_id: int = -1):
    """Update a3_timers from this tick's reports; return a HandoverDecision
    for the best qualifying neighbour, or None.

    A neighbour qualifies once its timer reaches time_to_trigger. Timers
    reset to zero the tick the margin is lost.
    """
    serving_rsrp = None
    for r in reports:
        if r.cell_id == serving:
            serving_rsrp = r.rsrp
            break
    if serving_rsrp is None:
        raise ValueError(f"serving cell {serving} missing from reports")

    qualified: list[SignalReport] = []
    for r in reports:
        if r.cell_id == serving:
            continue
        if r.rsrp - serving_rsrp >= hysteresis:
            a3_timers[r.cell_id] = a3_timers.get(r.cell_id, 0) + 1
            if a3_timers[r.cell_id] >= time_to_trigger:
                qualified.append(r)
        else:
            a3_timers[r.cell_id] = 0

    if not qualified:
        return None
    # strongest qualifying neighbour; ties broken by cell id ascending
    best = min(qualified, key=lambda r: (-r.rsrp, r.cell_id))
    return HandoverDecision(ue_id=ue_id, source_cell=serving, target_cell=best.cell_id)
