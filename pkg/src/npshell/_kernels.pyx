# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled pairwise kernel assemblies (hot inner loops).

Signature-compatible with ``_kernels_np``; see that module for the
kernel formulas and conventions.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport log, sin

cnp.import_array()

cdef double TWO_PI = 6.283185307179586476925286766559


def np_kernel_self(double[:, ::1] x, double[:, ::1] nu, double[::1] kappa,
                   double[::1] w):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t i, j
    cdef double dx, dy, r2
    out_arr = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    for i in range(n):
        for j in range(n):
            if i == j:
                out[i, j] = 0.5 * kappa[i] * w[i] / TWO_PI
            else:
                dx = x[i, 0] - x[j, 0]
                dy = x[i, 1] - x[j, 1]
                r2 = dx * dx + dy * dy
                out[i, j] = (dx * nu[i, 0] + dy * nu[i, 1]) / r2 * w[j] / TWO_PI
    return out_arr


def np_kernel_self_adjoint(double[:, ::1] x, double[:, ::1] nu,
                           double[::1] kappa, double[::1] w):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t i, j
    cdef double dx, dy, r2
    out_arr = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    for i in range(n):
        for j in range(n):
            if i == j:
                out[i, j] = 0.5 * kappa[i] * w[i] / TWO_PI
            else:
                dx = x[j, 0] - x[i, 0]
                dy = x[j, 1] - x[i, 1]
                r2 = dx * dx + dy * dy
                out[i, j] = (dx * nu[j, 0] + dy * nu[j, 1]) / r2 * w[j] / TWO_PI
    return out_arr


def log_kernel_smooth_self(double[:, ::1] x, double[::1] t, double[::1] speed):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t i, j
    cdef double dx, dy, r2, s
    out_arr = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    for i in range(n):
        for j in range(n):
            if i == j:
                out[i, j] = log(speed[i])
            else:
                dx = x[i, 0] - x[j, 0]
                dy = x[i, 1] - x[j, 1]
                r2 = dx * dx + dy * dy
                s = 2.0 * sin(0.5 * (t[i] - t[j]))
                out[i, j] = 0.5 * log(r2 / (s * s))
    return out_arr


def cross_log(double[:, ::1] z, double[:, ::1] y, double[::1] w):
    cdef Py_ssize_t m = z.shape[0], n = y.shape[0]
    cdef Py_ssize_t i, j
    cdef double dx, dy, r2
    out_arr = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    for i in range(m):
        for j in range(n):
            dx = z[i, 0] - y[j, 0]
            dy = z[i, 1] - y[j, 1]
            r2 = dx * dx + dy * dy
            out[i, j] = 0.5 * log(r2) * w[j] / TWO_PI
    return out_arr


def cross_directional(double[:, ::1] z, double[:, ::1] direction,
                      double[:, ::1] y, double[::1] w):
    cdef Py_ssize_t m = z.shape[0], n = y.shape[0]
    cdef Py_ssize_t i, j
    cdef double dx, dy, r2
    out_arr = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    for i in range(m):
        for j in range(n):
            dx = z[i, 0] - y[j, 0]
            dy = z[i, 1] - y[j, 1]
            r2 = dx * dx + dy * dy
            out[i, j] = (dx * direction[i, 0] + dy * direction[i, 1]) / r2 \
                * w[j] / TWO_PI
    return out_arr


def cross_hessian_nn(double[:, ::1] z, double[:, ::1] nu_t, double[:, ::1] y,
                     double[::1] w):
    cdef Py_ssize_t m = z.shape[0], n = y.shape[0]
    cdef Py_ssize_t i, j
    cdef double dx, dy, r2, dn
    out_arr = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    for i in range(m):
        for j in range(n):
            dx = z[i, 0] - y[j, 0]
            dy = z[i, 1] - y[j, 1]
            r2 = dx * dx + dy * dy
            dn = dx * nu_t[i, 0] + dy * nu_t[i, 1]
            out[i, j] = (1.0 / r2 - 2.0 * dn * dn / (r2 * r2)) * w[j] / TWO_PI
    return out_arr


def cross_dlp_normal(double[:, ::1] z, double[:, ::1] nu_t, double[:, ::1] y,
                     double[:, ::1] nu_s, double[::1] w):
    cdef Py_ssize_t m = z.shape[0], n = y.shape[0]
    cdef Py_ssize_t i, j
    cdef double dx, dy, r2, dt, ds, nn
    out_arr = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    for i in range(m):
        for j in range(n):
            dx = z[i, 0] - y[j, 0]
            dy = z[i, 1] - y[j, 1]
            r2 = dx * dx + dy * dy
            dt = dx * nu_t[i, 0] + dy * nu_t[i, 1]
            ds = dx * nu_s[j, 0] + dy * nu_s[j, 1]
            nn = nu_t[i, 0] * nu_s[j, 0] + nu_t[i, 1] * nu_s[j, 1]
            out[i, j] = (2.0 * dt * ds / r2 - nn) / r2 * w[j] / TWO_PI
    return out_arr
