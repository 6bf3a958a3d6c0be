"""The two scan kernels, certified-vs-exact agreement, escalation."""

import os

import numpy as np
import pytest

from rotn.exactreal import SurdReal, parse_cf
from rotn.scan import _scan_radii, backend_name, kernel_for, orbit_scan

A = parse_cf("[0;5,(6)]").value
HALF = SurdReal(1, 0, 2)


def test_backend_selection():
    assert backend_name() in ("cython", "python")
    assert callable(kernel_for("python"))
    with pytest.raises(ValueError):
        kernel_for("fortran")


def test_kernels_bitwise_identical():
    try:
        fast = kernel_for("cython")
    except ImportError:
        pytest.skip("compiled kernel not built")
    slow = kernel_for("python")
    x0f, af, base, slope = _scan_radii(HALF, A)
    for n in (1, 17, 10**4, 10**6):
        a = fast(x0f, af, n, base, slope)
        b = slow(x0f, af, n, base, slope)
        for xa, xb in zip(a, b):
            assert xa.dtype == xb.dtype
            assert np.array_equal(xa, xb)


def test_certified_agrees_with_exact():
    n = 10**5
    fast = orbit_scan(HALF, A, n, policy="certified")
    slow = orbit_scan(HALF, A, n, policy="exact")
    assert np.array_equal(fast.signs, slow.signs)
    assert np.array_equal(fast.sums, slow.sums)
    assert np.all(np.abs(fast.positions - slow.positions)
                  <= fast.radius_bound + 1e-12)


def test_audit_policy_runs_both_routes():
    scan = orbit_scan(HALF, A, 10**4, policy="audit")
    assert scan.policy == "audit"
    assert scan.sums[4] == -2


def test_backward_scan_sums():
    x = (1 + A) / 2
    fwd = orbit_scan(x, A, 200, policy="exact")
    back = orbit_scan(x, A, 200, direction=-1, policy="exact")
    # this seed is symmetric, so backward sums equal forward sums
    assert np.array_equal(back.sums, fwd.sums)
    assert back.sums[0] == 0
    # backward positions walk the inverse rotation
    from rotn.circle import rotate
    for n in (1, 7, 199):
        assert abs(back.positions[n] - float(rotate(x, A, -n).position)) \
            <= back.radius_bound + 1e-12


def test_escalation_is_observable_and_correct():
    x = HALF + SurdReal(1) / 2**80  # floats cannot see this offset
    scan = orbit_scan(x, A, 10, policy="certified")
    assert 0 in scan.escalated
    assert scan.signs[0] == -1  # exactly on the right of the split
    below = HALF - SurdReal(1) / 2**80
    scan2 = orbit_scan(below, A, 10, policy="certified")
    assert scan2.signs[0] == 1
    assert np.array_equal(scan.sums[1:], 0 + np.cumsum(scan.signs[:-1]) + 0)


def test_radius_model_is_honest():
    n = 10**6
    scan = orbit_scan(HALF, A, n, policy="certified")
    exact = orbit_scan(HALF, A, n, policy="exact")
    assert scan.radius_bound < 1e-6
    err = np.abs(scan.positions - exact.positions)
    # true float error must sit inside the claimed radius everywhere
    assert float(err.max()) <= scan.radius_bound


def test_env_var_forces_python_backend():
    import subprocess
    import sys
    code = "from rotn.scan import backend_name; print(backend_name())"
    env = dict(os.environ, ROTN_SCAN_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True)
    assert out.stdout.strip() == "python"


def test_policy_validation():
    with pytest.raises(ValueError):
        orbit_scan(HALF, A, 10, policy="sloppy")
    with pytest.raises(ValueError):
        orbit_scan(HALF, A, -1)
    with pytest.raises(ValueError):
        orbit_scan(HALF, A, 10, direction=0)
