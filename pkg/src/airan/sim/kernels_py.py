"""Pure-Python radio kernels, the fallback when the compiled extension is
absent. Loop structure and arithmetic mirror _kernels.pyx exactly; both call
the same libm functions, so results are bit-identical across backends."""

from math import log10, sqrt


def backend_name():
    return "python"


def rsrp_dbm(tx_power_dbm, dx, dy, d0, l0, n):
    d = sqrt(dx * dx + dy * dy)
    if d < d0:
        d = d0
    return tx_power_dbm - (l0 + 10.0 * n * log10(d / d0))


def sinr_db(serving_mw, interference_mw, noise_mw):
    return 10.0 * log10(serving_mw / (interference_mw + noise_mw))


def measure(ue_x, ue_y, cell_x, cell_y, tx_dbm, noise_mw, d0, l0, n,
            out_rsrp, out_sinr):
    """Fill row-major (n_ue*n_cell) RSRP and per-pair SINR matrices.

    SINR for pair (u, c) treats c as serving and every other cell as an
    interferer, summed in cell index order.
    """
    n_ue = len(ue_x)
    n_cell = len(cell_x)
    for u in range(n_ue):
        for c in range(n_cell):
            dx = ue_x[u] - cell_x[c]
            dy = ue_y[u] - cell_y[c]
            d = sqrt(dx * dx + dy * dy)
            if d < d0:
                d = d0
            out_rsrp[u * n_cell + c] = tx_dbm[c] - (l0 + 10.0 * n * log10(d / d0))
        for c in range(n_cell):
            s_mw = 10.0 ** (out_rsrp[u * n_cell + c] / 10.0)
            i_mw = 0.0
            for k in range(n_cell):
                if k != c:
                    i_mw = i_mw + 10.0 ** (out_rsrp[u * n_cell + k] / 10.0)
            out_sinr[u * n_cell + c] = 10.0 * log10(s_mw / (i_mw + noise_mw))
