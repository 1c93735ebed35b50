# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled fast paths for the panel-scan kernels.

Fused single-pass versions of the functions in ``fallback.py``: one sweep
over the panel instead of three BLAS/temporary passes.  Build in place with
``python setup.py build_ext --inplace``.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def quartic_accumulate(double[:, ::1] x, double[::1] w):
    """One pass over a T-by-N panel for the quartic statistics of u = x @ w.

    Returns ``(mean of x[t] * u[t]**3 over t, mean of u**2, mean of u**4)``.
    """
    cdef Py_ssize_t t_len = x.shape[0]
    cdef Py_ssize_t n = x.shape[1]
    out_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] acc = out_arr
    cdef double u, u2, u3, m2 = 0.0, m4 = 0.0
    cdef Py_ssize_t t, j
    with nogil:
        for t in range(t_len):
            u = 0.0
            for j in range(n):
                u = u + x[t, j] * w[j]
            u2 = u * u
            u3 = u2 * u
            m2 = m2 + u2
            m4 = m4 + u2 * u2
            for j in range(n):
                acc[j] = acc[j] + x[t, j] * u3
    cdef double tf = <double> t_len
    out_arr /= tf
    return out_arr, m2 / tf, m4 / tf


def max_drawdown_scan(double[::1] equity):
    """Largest peak-to-trough fractional decline of an equity curve, in [0, 1]."""
    cdef Py_ssize_t t_len = equity.shape[0]
    cdef double peak = equity[0]
    cdef double dd = 0.0
    cdef double cur
    cdef Py_ssize_t t
    with nogil:
        for t in range(t_len):
            if equity[t] > peak:
                peak = equity[t]
            cur = 1.0 - equity[t] / peak
            if cur > dd:
                dd = cur
    if dd < 0.0:
        dd = 0.0
    elif dd > 1.0:
        dd = 1.0
    return dd
