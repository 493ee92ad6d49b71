"""Compiled position-grid evaluation kernels (see _kernels_py for the contract)."""

import numpy as np

from libc.math cimport cos, sin


def response_at(const double complex[::1] gains,
                const double[::1] dir_x,
                const double[::1] dir_y,
                double wavenumber,
                const double[::1] xs,
                const double[::1] ys):
    cdef Py_ssize_t n_pos = xs.shape[0]
    cdef Py_ssize_t n_path = gains.shape[0]
    out_arr = np.empty(n_pos, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t p, l
    cdef double ph, c, s, re, im, gr, gi
    for p in range(n_pos):
        re = 0.0
        im = 0.0
        for l in range(n_path):
            ph = -wavenumber * (dir_x[l] * xs[p] + dir_y[l] * ys[p])
            c = cos(ph)
            s = sin(ph)
            gr = gains[l].real
            gi = gains[l].imag
            re += gr * c - gi * s
            im += gr * s + gi * c
        out[p] = re + 1j * im
    return out_arr


def power_at(const double[::1] magnitudes,
             const double[::1] phases,
             const double[::1] dir_x,
             const double[::1] dir_y,
             double wavenumber,
             const double[::1] xs,
             const double[::1] ys):
    # cos of the pair argument is even, so each (m, n)/(n, m) pair is folded
    # into one term; the value is the full double sum, reordered.
    cdef Py_ssize_t n_pos = xs.shape[0]
    cdef Py_ssize_t n_path = magnitudes.shape[0]
    out_arr = np.empty(n_pos, dtype=np.float64)
    cdef double[::1] out = out_arr
    psi_arr = np.empty(n_path, dtype=np.float64)
    cdef double[::1] psi = psi_arr
    cdef Py_ssize_t p, m, n
    cdef double acc, diag
    for p in range(n_pos):
        diag = 0.0
        for m in range(n_path):
            psi[m] = wavenumber * (dir_x[m] * xs[p] + dir_y[m] * ys[p]) - phases[m]
            diag += magnitudes[m] * magnitudes[m]
        acc = 0.0
        for m in range(n_path):
            for n in range(m + 1, n_path):
                acc += magnitudes[m] * magnitudes[n] * cos(psi[m] - psi[n])
        out[p] = diag + 2.0 * acc
    return out_arr
