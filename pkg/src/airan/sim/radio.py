"""Scalar radio operations: log-distance pathloss RSRP and linear-domain SINR.

Defaults: d0 = 1 m reference distance, L0 = 32.45 dB intercept, exponent
n = 3.5. The per-tick bulk pass lives in the kernels module; these scalars
share the same arithmetic so both paths agree bit-for-bit.
"""

from __future__ import annotations

from airan.sim import kernels
from airan.sim.types import Cell

DEFAULT_D0 = 1.0
DEFAULT_L0 = 32.45
DEFAULT_N = 3.5


def compute_rsrp(cell: Cell, position: tuple[float, float],
                 d0: float = DEFAULT_D0, l0: float = DEFAULT_L0,
                 n: float = DEFAULT_N) -> float:
    """RSRP in dBm at `position` from `cell`; distance clamped to d0."""
    dx = position[0] - cell.position[0]
    dy = position[1] - cell.position[1]
    return kernels.rsrp_dbm(cell.tx_power, dx, dy, d0, l0, n)


def compute_sinr(serving_rsrp: float, interferer_rsrps: list[float],
                 noise_floor: float) -> float:
    """SINR in dB: all terms converted to linear mW, 10*log10(S/(sum I + N))."""
    s_mw = 10.0 ** (serving_rsrp / 10.0)
    i_mw = 0.0
    for r in interferer_rsrps:
        i_mw = i_mw + 10.0 ** (r / 10.0)
    n_mw = 10.0 ** (noise_floor / 10.0)
    return kernels.sinr_db(s_mw, i_mw, n_mw)
