# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernel: real part of a weighted sum of complex phases.

Every observable in this package reduces, after one Hermitian
eigendecomposition, to

    f(t) = sum_j Re( a_j * exp(i * nu_j * t) )

evaluated on dense time or quadrature grids.  This loop dominates the
runtime of field scans and recombination-weighted integrals, so it gets
a C implementation.  The NumPy fallback in rpsense.kernels computes the
same ordered sum.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin

cnp.import_array()


def phase_series(const double complex[::1] amps,
                 const double[::1] freqs,
                 const double[::1] times):
    """Evaluate out[i] = sum_j Re(amps[j] * exp(1j*freqs[j]*times[i]))."""
    cdef Py_ssize_t n = amps.shape[0]
    cdef Py_ssize_t m = times.shape[0]
    if freqs.shape[0] != n:
        raise ValueError("amps and freqs must have equal length")
    out_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double acc, t, ph
    with nogil:
        for i in range(m):
            t = times[i]
            acc = 0.0
            for j in range(n):
                ph = freqs[j] * t
                acc += amps[j].real * cos(ph) - amps[j].imag * sin(ph)
            out[i] = acc
    return out_arr
