"""Numpy implementations of the position-grid evaluation kernels.

These are the fallback used when the compiled extension is unavailable.
Both backends accumulate strictly in path order so results agree with a
plain sequential summation (and with each other to floating-point noise).
"""

import numpy as np

_CHUNK = 256  # positions per block in the pairwise kernel, bounds temporaries


def response_at(gains, dir_x, dir_y, wavenumber, xs, ys):
    """Complex channel response at many positions.

    out[p] = sum_l gains[l] * exp(-1j * wavenumber * (dir_x[l]*xs[p] + dir_y[l]*ys[p]))
    """
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    out = np.zeros(xs.shape[0], dtype=np.complex128)
    for l in range(len(gains)):
        out += gains[l] * np.exp(-1j * wavenumber * (dir_x[l] * xs + dir_y[l] * ys))
    return out


def power_at(magnitudes, phases, dir_x, dir_y, wavenumber, xs, ys):
    """Squared response magnitude via the explicit pairwise expansion.

    out[p] = sum_{m,n} a_m * a_n * cos(wavenumber*(rho_m - rho_n) + (phi_n - phi_m))

    with rho_l = dir_x[l]*x + dir_y[l]*y. Kept as a literal double sum so it
    stays an independent route from `response_at`.
    """
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    mags = np.asarray(magnitudes, dtype=np.float64)
    weight = mags[:, None] * mags[None, :]
    out = np.empty(xs.shape[0], dtype=np.float64)
    for start in range(0, xs.shape[0], _CHUNK):
        sl = slice(start, min(start + _CHUNK, xs.shape[0]))
        # psi[p, l] = wavenumber*rho_l(p) - phi_l, so the pair argument is psi_m - psi_n
        psi = wavenumber * (np.outer(xs[sl], dir_x) + np.outer(ys[sl], dir_y)) - phases[None, :]
        out[sl] = np.einsum(
            "mn,pmn->p", weight, np.cos(psi[:, :, None] - psi[:, None, :])
        )
    return out
