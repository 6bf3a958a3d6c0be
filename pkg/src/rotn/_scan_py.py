"""Numpy fallback for the orbit scan kernel.

Same contract as the compiled kernel in ``_scan_cy``: positions are
computed per element as frac(x0 + i*alpha) in double precision (the
direct formula, not an incremental recurrence, so errors stay linear in
i and the two backends agree bitwise), signs are decided against 1/2,
and every index whose certified interval touches 0, 1/2 or 1 is
reported for exact escalation by the caller.

Chunked to keep temporaries around 8 MB regardless of scan length.
"""

from __future__ import annotations

import numpy as np

_CHUNK = 1 << 20


def scan_kernel(x0, alpha, n, base_radius, radius_slope):
    """Return (pos[n], signs[n], ambiguous indices) for i = 0..n-1."""
    pos = np.empty(n, dtype=np.float64)
    signs = np.empty(n, dtype=np.int8)
    amb_parts = []
    for lo in range(0, n, _CHUNK):
        hi = min(lo + _CHUNK, n)
        i = np.arange(lo, hi, dtype=np.float64)
        z = x0 + i * alpha
        z -= np.floor(z)
        # frac can round up to exactly 1.0 for z just under an integer
        wrapped = z >= 1.0
        if wrapped.any():
            z[wrapped] = 0.0
        pos[lo:hi] = z
        signs[lo:hi] = np.where(z < 0.5, 1, -1).astype(np.int8)
        rad = base_radius + i * radius_slope
        bad = (np.abs(z - 0.5) <= rad) | (z <= rad) | (z >= 1.0 - rad)
        if bad.any():
            amb_parts.append(np.nonzero(bad)[0].astype(np.int64) + lo)
    if amb_parts:
        ambiguous = np.concatenate(amb_parts)
    else:
        ambiguous = np.empty(0, dtype=np.int64)
    return pos, signs, ambiguous
