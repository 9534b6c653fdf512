# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fixed-step RK4 for the quadratic Euler-Phillips field family."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline void _field(const double* c, double x, double p, double* dx, double* dp) noexcept nogil:
    dx[0] = (c[0] + c[1] * x) * (c[2] + c[3] * (x - c[5]) + c[4] * p)
    dp[0] = c[6] + c[7] * (x - c[5]) + c[8] * p


def rk4_path(double[::1] coeffs, double x0, double pi0, double h, Py_ssize_t n,
             double sign, double x_min):
    """Integrate dz/dtau = sign * f(z) for n steps of size h.

    Returns (x, pi, breach) where x and pi have n + 1 entries and breach is
    the index of the first sample with x <= x_min (-1 if none).  Samples
    after a breach are left at zero.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs_arr = np.zeros(n + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ps_arr = np.zeros(n + 1)
    cdef double[::1] xs = xs_arr
    cdef double[::1] ps = ps_arr
    cdef const double* c = &coeffs[0]
    cdef double x = x0, p = pi0
    cdef double k1x, k1p, k2x, k2p, k3x, k3p, k4x, k4p
    cdef double sh = sign * h
    cdef double half = 0.5 * sh
    cdef Py_ssize_t i
    cdef Py_ssize_t breach = -1
    xs[0] = x
    ps[0] = p
    if x_min == x_min and x <= x_min:
        return xs_arr, ps_arr, 0
    with nogil:
        for i in range(n):
            _field(c, x, p, &k1x, &k1p)
            _field(c, x + half * k1x, p + half * k1p, &k2x, &k2p)
            _field(c, x + half * k2x, p + half * k2p, &k3x, &k3p)
            _field(c, x + sh * k3x, p + sh * k3p, &k4x, &k4p)
            x = x + sh * (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0
            p = p + sh * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0
            xs[i + 1] = x
            ps[i + 1] = p
            if x_min == x_min and x <= x_min:
                breach = i + 1
                break
    return xs_arr, ps_arr, breach
