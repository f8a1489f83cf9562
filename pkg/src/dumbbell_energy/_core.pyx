# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batched log-kernel sum; mirrors ``_fallback.batch_log_sum``."""

import numpy as np
from libc.math cimport log


def batch_log_sum(int case, const double[::1] z, const double[::1] w,
                  const double[::1] x, const double[::1] y,
                  const double[::1] weight, const double[::1] alpha,
                  const double[::1] beta, double floor):
    cdef Py_ssize_t npts = alpha.shape[0]
    cdef Py_ssize_t nodes = z.shape[0]
    cdef Py_ssize_t p, i
    cdef double a, b, ab, p1, q1, k, acc
    cdef long clamped = 0
    out = np.empty(npts)
    cdef double[::1] res = out
    if w.shape[0] != nodes or x.shape[0] != nodes or y.shape[0] != nodes or weight.shape[0] != nodes:
        raise ValueError("node tables must have equal length")
    if beta.shape[0] != npts:
        raise ValueError("alpha and beta must have equal length")
    with nogil:
        for p in range(npts):
            a = alpha[p]
            b = beta[p]
            ab = a * b
            acc = 0.0
            for i in range(nodes):
                if case == 0:
                    p1 = z[i] - 2 * a * x[i] - 2 * b * y[i] + 4 * a * b * w[i]
                    k = p1 * p1
                elif case == 1:
                    p1 = z[i] - ab * w[i]
                    q1 = a * x[i] + b * y[i]
                    k = p1 * p1 + q1 * q1
                else:
                    p1 = z[i] - 2 * a * x[i]
                    q1 = y[i] - 2 * a * w[i]
                    k = p1 * p1 + 4 * (b * b) * (q1 * q1)
                if k < floor:
                    k = floor
                    clamped += 1
                acc += weight[i] * log(k)
            res[p] = acc
    return out, clamped
