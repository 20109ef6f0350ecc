"""Kernel backend selection.

Prefers the compiled extension, falls back to the pure-Python module.
AIRAN_KERNELS=python forces the fallback (used by the benchmark and by
tests that compare the two backends).
"""

import os

if os.environ.get("AIRAN_KERNELS") == "python":
    from airan.sim import kernels_py as _impl
else:
    try:
        from airan.sim import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from airan.sim import kernels_py as _impl

BACKEND = _impl.backend_name()

rsrp_dbm = _impl.rsrp_dbm
sinr_db = _impl.sinr_db
measure = _impl.measure
