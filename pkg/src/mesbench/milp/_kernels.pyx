# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled simplex pivot kernel.

Same contract as _kernels_py.eliminate.  Compiled with -ffp-contract=off so
the multiply/subtract sequence matches the numpy fallback bit for bit.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"


def eliminate(double[:, ::1] T, double[::1] z, Py_ssize_t r, Py_ssize_t q):
    """Pivot the tableau on (row r, column q) and update reduced costs z."""
    cdef Py_ssize_t m = T.shape[0]
    cdef Py_ssize_t n = T.shape[1]
    cdef Py_ssize_t i, j
    cdef double piv = T[r, q]
    cdef double inv = 1.0 / piv
    cdef double f

    for j in range(n):
        T[r, j] *= inv
    T[r, q] = 1.0

    for i in range(m):
        if i == r:
            continue
        f = T[i, q]
        if f != 0.0:
            for j in range(n):
                T[i, j] -= f * T[r, j]
        T[i, q] = 0.0
    T[r, q] = 1.0

    f = z[q]
    if f != 0.0:
        for j in range(n):
            z[j] -= f * T[r, j]
    z[q] = 0.0
