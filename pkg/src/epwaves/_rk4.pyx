# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 integrator for the traveling-profile ODE."""
import numpy as np
from libc.math cimport pow, INFINITY, NAN


cdef inline double _h(double rho, double V2, double Tg, double ge) nogil:
    return V2 / (rho * rho * rho) - Tg * pow(rho, ge)


def integrate_profile(double E0, double dE0, double k, Py_ssize_t M,
                      double V, double T, double gamma):
    cdef double V2 = V * V, Tg = T * gamma, ge = gamma - 2.0, k2 = k * k
    cdef double step = 1.0 / M, half = 0.5 * step
    cdef double e = E0, d = dE0, min_h = INFINITY
    cdef double rho, h
    cdef Py_ssize_t m, s
    E_arr = np.empty(M + 1)
    dE_arr = np.empty(M + 1)
    cdef double[::1] E = E_arr
    cdef double[::1] dE = dE_arr
    cdef double es[4]
    cdef double ds[4]
    cdef double ka[4]
    cdef double kb[4]
    E[0] = e
    dE[0] = d
    with nogil:
        for m in range(M):
            es[0] = e
            ds[0] = d
            for s in range(4):
                if s > 0:
                    es[s] = e + (step if s == 3 else half) * ka[s - 1]
                    ds[s] = d + (step if s == 3 else half) * kb[s - 1]
                rho = 1.0 + k * ds[s]
                if rho <= 0.0:
                    min_h = -INFINITY
                    ka[s] = ds[s]
                    kb[s] = NAN
                    continue
                h = _h(rho, V2, Tg, ge)
                if h < min_h:
                    min_h = h
                ka[s] = ds[s]
                kb[s] = -es[s] / (k2 * h)
            e = e + step / 6.0 * (ka[0] + 2 * ka[1] + 2 * ka[2] + ka[3])
            d = d + step / 6.0 * (kb[0] + 2 * kb[1] + 2 * kb[2] + kb[3])
            E[m + 1] = e
            dE[m + 1] = d
    return E_arr, dE_arr, min_h
