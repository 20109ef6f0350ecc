# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled radio kernels: pathloss/RSRP and SINR over all UE-cell pairs.

Must stay operation-for-operation identical to kernels_py.py so that the
two backends produce bit-equal results.
"""

from libc.math cimport log10, pow, sqrt


def backend_name():
    return "cython"


def rsrp_dbm(double tx_power_dbm, double dx, double dy,
             double d0, double l0, double n):
    cdef double d = sqrt(dx * dx + dy * dy)
    if d < d0:
        d = d0
    return tx_power_dbm - (l0 + 10.0 * n * log10(d / d0))


def sinr_db(double serving_mw, double interference_mw, double noise_mw):
    return 10.0 * log10(serving_mw / (interference_mw + noise_mw))


def measure(double[:] ue_x, double[:] ue_y,
            double[:] cell_x, double[:] cell_y, double[:] tx_dbm,
            double noise_mw, double d0, double l0, double n,
            double[:] out_rsrp, double[:] out_sinr):
    """Fill row-major (n_ue*n_cell) RSRP and per-pair SINR matrices.

    SINR for pair (u, c) treats c as serving and every other cell as an
    interferer, summed in cell index order.
    """
    cdef Py_ssize_t n_ue = ue_x.shape[0]
    cdef Py_ssize_t n_cell = cell_x.shape[0]
    cdef Py_ssize_t u, c, k
    cdef double dx, dy, d, s_mw, i_mw
    for u in range(n_ue):
        for c in range(n_cell):
            dx = ue_x[u] - cell_x[c]
            dy = ue_y[u] - cell_y[c]
            d = sqrt(dx * dx + dy * dy)
            if d < d0:
                d = d0
            out_rsrp[u * n_cell + c] = tx_dbm[c] - (l0 + 10.0 * n * log10(d / d0))
        for c in range(n_cell):
            s_mw = pow(10.0, out_rsrp[u * n_cell + c] / 10.0)
            i_mw = 0.0
            for k in range(n_cell):
                if k != c:
                    i_mw = i_mw + pow(10.0, out_rsrp[u * n_cell + k] / 10.0)
            out_sinr[u * n_cell + c] = 10.0 * log10(s_mw / (i_mw + noise_mw))
