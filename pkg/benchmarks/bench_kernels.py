"""Compare the compiled radio kernels against the pure-Python fallback.

Times the batched measure() kernel (the per-tick hot path) and the scalar
helpers at several fleet sizes, checks both backends agree bit-for-bit on
the same inputs, and prints per-call medians with the speedup.

Run from the repo root: python3 benchmarks/bench_kernels.py
"""

from __future__ import annotations

import random
import statistics
import sys
import time
from array import array
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from airan.sim import kernels_py

try:
    from airan.sim import _kernels
except ImportError:
    _kernels = None

NOISE_MW = 10.0 ** (-104.0 / 10.0)
D0, L0, EXP = 1.0, 32.45, 3.5


def make_fleet(rng, n_ue, n_cell):
    ue_x = array("d", (rng.uniform(0, 1000) for _ in range(n_ue)))
    ue_y = array("d", (rng.uniform(0, 1000) for _ in range(n_ue)))
    cell_x = array("d", (rng.uniform(0, 1000) for _ in range(n_cell)))
    cell_y = array("d", (rng.uniform(0, 1000) for _ in range(n_cell)))
    tx = array("d", (rng.choice([40.0, 43.0, 46.0]) for _ in range(n_cell)))
    return ue_x, ue_y, cell_x, cell_y, tx


def time_measure(impl, fleet, n_ue, n_cell, repeats=200):
    ue_x, ue_y, cell_x, cell_y, tx = fleet
    out_rsrp = array("d", bytes(8 * n_ue * n_cell))
    out_sinr = array("d", bytes(8 * n_ue * n_cell))
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        impl.measure(ue_x, ue_y, cell_x, cell_y, tx,
                     NOISE_MW, D0, L0, EXP, out_rsrp, out_sinr)
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples), out_rsrp, out_sinr


def time_scalar(impl, rng, repeats=20_000):
    args = [(rng.uniform(-120, 60), rng.uniform(-900, 900),
             rng.uniform(-900, 900)) for _ in range(64)]
    t0 = time.perf_counter()
    for _ in range(repeats // 64):
        for tx, dx, dy in args:
            impl.rsrp_dbm(tx, dx, dy, D0, L0, EXP)
    return (time.perf_counter() - t0) / repeats


def main():
    if _kernels is None:
        print("compiled extension not built; nothing to compare")
        return 1

    rng = random.Random(7)
    print(f"{'fleet':>12}  {'python':>12}  {'cython':>12}  {'speedup':>8}")
    for n_ue, n_cell in ((12, 3), (64, 8), (256, 16), (1024, 32)):
        fleet = make_fleet(rng, n_ue, n_cell)
        t_py, r_py, s_py = time_measure(kernels_py, fleet, n_ue, n_cell)
        t_cy, r_cy, s_cy = time_measure(_kernels, fleet, n_ue, n_cell)
        if list(r_py) != list(r_cy) or list(s_py) != list(s_cy):
            print(f"MISMATCH at {n_ue}x{n_cell}: backends disagree")
            return 1
        print(f"{n_ue:>5} x {n_cell:<4}  {t_py * 1e6:>10.1f}us  "
              f"{t_cy * 1e6:>10.1f}us  {t_py / t_cy:>7.1f}x")

    t_py = time_scalar(kernels_py, random.Random(7))
    t_cy = time_scalar(_kernels, random.Random(7))
    print(f"{'scalar rsrp':>12}  {t_py * 1e9:>10.1f}ns  "
          f"{t_cy * 1e9:>10.1f}ns  {t_py / t_cy:>7.1f}x")
    print("outputs bit-identical across backends at every size")
    return 0


if __name__ == "__main__":
    sys.exit(main())
