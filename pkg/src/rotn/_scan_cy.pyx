# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled orbit scan kernel.

Must stay observationally identical to ``_scan_py.scan_kernel``: same
per-element formula frac(x0 + i*alpha), same sign rule, same ambiguity
test, so the two backends produce bitwise equal arrays and the test
suite can assert that.  One fused pass instead of numpy temporaries.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport floor

cnp.import_array()


def scan_kernel(double x0, double alpha, Py_ssize_t n,
                double base_radius, double radius_slope):
    """Return (pos[n], signs[n], ambiguous indices) for i = 0..n-1."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] pos = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.int8_t, ndim=1] signs = np.empty(n, dtype=np.int8)
    amb = []
    cdef Py_ssize_t i
    cdef double z, rad, fi
    for i in range(n):
        fi = <double> i
        z = x0 + fi * alpha
        z -= floor(z)
        if z >= 1.0:
            z = 0.0
        pos[i] = z
        signs[i] = 1 if z < 0.5 else -1
        rad = base_radius + fi * radius_slope
        if (-rad <= z - 0.5 <= rad) or z <= rad or z >= 1.0 - rad:
            amb.append(i)
    return pos, signs, np.asarray(amb, dtype=np.int64)
