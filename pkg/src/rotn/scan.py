"""Long orbit scans of the sign cocycle, certified or exact.

The object of interest is the orbit x, tx, t^2 x, ... of an irrational
rotation together with the signs f = +1 on [0, 1/2), -1 on [1/2, 1) and
their running (Birkhoff) sums.  Scans of 10^6..10^7 steps dominate the
package's runtime, so the inner loop runs in floating point with a
rigorous error radius, and only the rare steps whose certified interval
touches 0, 1/2 or 1 are recomputed exactly.  With the standard radii
that is a handful of escalations per 10^7 steps, and the resulting sign
sequence is exact, not approximate.

Positions are evaluated by the direct formula frac(x0 + i*alpha), not
incrementally, so the error is linear in i with no compounding and the
numpy and compiled backends agree bitwise.  The backend is chosen at
import time: the compiled kernel if it built, else numpy.  Set
ROTN_SCAN_BACKEND=python to force the fallback.

The "exact" policy replaces the float loop with integer arithmetic in
the quadratic field (positions are still reported as floats, but every
sign and wrap decision is exact).  The "audit" policy runs both and
insists they agree.
"""

from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass

import numpy as np

from .exactreal import SurdReal, escalations

__all__ = ["OrbitScan", "orbit_scan", "backend_name", "kernel_for"]

logger = logging.getLogger(__name__)

from . import _scan_py as _fallback

_impl = _fallback
_backend = "python"
if os.environ.get("ROTN_SCAN_BACKEND", "") != "python":
    try:
        from . import _scan_cy as _compiled

        _impl = _compiled
        _backend = "cython"
    except ImportError:
        logger.info("compiled scan kernel not available; using numpy fallback")


def backend_name() -> str:
    """Which kernel this process is using: 'cython' or 'python'."""
    return _backend


def kernel_for(name: str):
    """Fetch a specific kernel implementation (for benchmarks and tests)."""
    if name == "python":
        return _fallback.scan_kernel
    if name == "cython":
        from . import _scan_cy  # ImportError if not built

        return _scan_cy.scan_kernel
    raise ValueError("unknown backend %r" % (name,))


_POLICIES = ("certified", "exact", "audit")


@dataclass
class OrbitScan:
    """Orbit points 0..n of x0 under rotation by direction*alpha.

    positions[i] approximates t^(direction*i)(x0) in [0, 1);
    signs[i] is f there, exact under every policy;
    sums[j] is the Birkhoff sum S_(direction*j)(x0), so sums[0] = 0,
    forward sums add signs[0..j-1], backward sums are -(signs[1..j]).
    """

    x0: SurdReal
    alpha: SurdReal
    count: int
    direction: int
    policy: str
    backend: str
    positions: np.ndarray
    signs: np.ndarray
    sums: np.ndarray
    escalated: np.ndarray
    radius_bound: float

    def sign_at(self, i: int) -> int:
        return int(self.signs[i])

    def sum_at(self, j: int) -> int:
        return int(self.sums[j])


def _scan_radii(x0: SurdReal, alpha: SurdReal):
    """Float seeds and rigorous radius model rad(i) = base + i*slope.

    Covers: the certified radii of x0 and alpha, the rounding of i*af,
    of the sum, and the one possible rounding in the wrap for backward
    scans.  Factors of 4 give headroom so the bound is unimpeachable.
    """
    c0 = x0.certified()
    ca = alpha.certified()
    base = c0.radius + 2.0**-51
    slope = ca.radius + abs(ca.value) * 2.0**-51
    return c0.value, ca.value, base, slope


def orbit_scan(
    x0: SurdReal,
    alpha: SurdReal,
    n_steps: int,
    *,
    direction: int = 1,
    policy: str = "certified",
) -> OrbitScan:
    """Scan the orbit for n_steps steps (n_steps + 1 points including x0)."""
    if policy not in _POLICIES:
        raise ValueError("policy must be one of %r, got %r" % (_POLICIES, policy))
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1, got %r" % (direction,))
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0, got %r" % (n_steps,))
    x0 = x0.frac()
    count = n_steps + 1

    if policy == "exact":
        positions, signs, escalated, radius = _exact_scan(x0, alpha, count, direction)
        backend = "exact"
    else:
        positions, signs, escalated, radius = _certified_scan(
            x0, alpha, count, direction
        )
        backend = _backend
        if policy == "audit":
            ep, es, _, _ = _exact_scan(x0, alpha, count, direction)
            bad = np.nonzero(es != signs)[0]
            if bad.size:
                raise AssertionError(
                    "certified scan disagrees with exact arithmetic at "
                    "indices %s" % (bad[:10],)
                )

    sums = np.zeros(count, dtype=np.int64)
    if direction == 1:
        np.cumsum(signs[: count - 1], dtype=np.int64, out=sums[1:])
    else:
        np.cumsum(signs[1:], dtype=np.int64, out=sums[1:])
        np.negative(sums, out=sums)

    return OrbitScan(
        x0=x0,
        alpha=alpha,
        count=count,
        direction=direction,
        policy=policy,
        backend=backend,
        positions=positions,
        signs=signs,
        sums=sums,
        escalated=escalated,
        radius_bound=radius,
    )


def _certified_scan(x0: SurdReal, alpha: SurdReal, count: int, direction: int):
    x0f, af, base, slope = _scan_radii(x0, alpha)
    step = af if direction == 1 else -af
    positions, signs, ambiguous = _impl.scan_kernel(x0f, step, count, base, slope)
    if ambiguous.size:
        exact_step = alpha if direction == 1 else -alpha
        half = SurdReal(1, 0, 2)
        for i in ambiguous:
            exact = (x0 + exact_step * int(i)).frac()
            signs[i] = 1 if exact < half else -1
            positions[i] = float(exact)
        escalations.bump(int(ambiguous.size))
        logger.debug(
            "scan escalated %d of %d steps to exact arithmetic", ambiguous.size, count
        )
    return positions, signs, ambiguous, base + (count - 1) * slope


def _int_sign(a: int, b: int, d: int) -> int:
    """Sign of a + b*sqrt(d), exact integer arithmetic."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return 1 if b > 0 else -1
    if a > 0:
        if b > 0:
            return 1
        t = a * a - b * b * d
    else:
        if b < 0:
            return -1
        t = b * b * d - a * a
    return (t > 0) - (t < 0)


def _exact_scan(x0: SurdReal, alpha: SurdReal, count: int, direction: int):
    """Integer-only scan: exact signs, float positions for reporting.

    Orbit points stay over one common denominator R in one field, so a
    step is two integer adds, a wrap test and a sign test.
    """
    if alpha.is_rational:
        raise ValueError("rotation number must be irrational")
    d = alpha.d if x0.is_rational else x0._join(alpha)
    R = math.lcm(x0.r, alpha.r)
    P = x0.p * (R // x0.r)
    Q = x0.q * (R // x0.r)
    Pa = alpha.p * (R // alpha.r) * direction
    Qa = alpha.q * (R // alpha.r) * direction

    sqd = math.sqrt(d)
    positions = np.empty(count, dtype=np.float64)
    signs = np.empty(count, dtype=np.int8)
    for i in range(count):
        # x < 1/2 iff 2P - R + 2Q*sqrt(d) < 0; the boundary itself is -1
        positions[i] = (P + Q * sqd) / R
        signs[i] = 1 if _int_sign(2 * P - R, 2 * Q, d) < 0 else -1
        P += Pa
        Q += Qa
        if _int_sign(P - R, Q, d) >= 0:
            P -= R
        elif _int_sign(P, Q, d) < 0:
            P += R
    return positions, signs, np.empty(0, dtype=np.int64), 0.0
