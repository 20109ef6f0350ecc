"""PRB-level radio resource management: proportional share with
largest-remainder rounding, ties broken by UE id ascending.

All-integer arithmetic, so allocation is exact and deterministic.
"""

from __future__ import annotations


def allocate_prbs(capacity: int, demands: dict[int, int]) -> dict[int, int]:
    """Split `capacity` PRBs over per-UE integer demands.

    Under-subscription grants every demand in full; over-subscription gives
    proportional shares rounded by largest remainder. The result never
    exceeds any UE's demand and sums to at most `capacity`.
    """
    if capacity <= 0:
        raise ValueError("capacity must be positive")
    for ue_id, d in demands.items():
        if d < 0:
            raise ValueError(f"negative demand for UE {ue_id}")

    total = sum(demands.values())
    if total <= capacity:
        return dict(demands)

    floors: dict[int, int] = {}
    remainders: list[tuple[int, int]] = []  # (remainder, ue_id)
    for ue_id in sorted(demands):
        share, rem = divmod(capacity * demands[ue_id], total)
        floors[ue_id] = share
        remainders.append((rem, ue_id))

    leftover = capacity - sum(floors.values())
    remainders.sort(key=lambda t: (-t[0], t[1]))
    for rem, ue_id in remainders[:leftover]:
        floors[ue_id] += 1
    return floors
