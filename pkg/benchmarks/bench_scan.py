"""Time the two scan kernels against each other and confirm they agree.

Run as a script:  python benchmarks/bench_scan.py [N ...]

The compiled kernel and the numpy fallback must produce bitwise
identical outputs, so every timing pass doubles as an equality test.
"""

from __future__ import annotations

import sys
import time

import numpy as np

from rotn.exactreal import parse_cf
from rotn.scan import _scan_radii, kernel_for

ALPHA = "[0;5,(6)]"


def one_size(n: int, kernels: dict) -> None:
    alpha = parse_cf(ALPHA).value
    half = alpha / alpha / 2  # exact 1/2 in the same surd field
    x0f, af, base, slope = _scan_radii(half, alpha)

    results, timings = {}, {}
    for name, kern in kernels.items():
        best = float("inf")
        for _ in range(3):
            t0 = time.perf_counter()
            out = kern(x0f, af, n, base, slope)
            best = min(best, time.perf_counter() - t0)
        results[name], timings[name] = out, best

    names = sorted(kernels)
    a, b = results[names[0]], results[names[1]]
    agree = all(np.array_equal(x, y) for x, y in zip(a, b))
    flagged = int(a[2].sum())
    line = "  ".join("%s %8.4fs" % (nm, timings[nm]) for nm in names)
    ratio = timings["python"] / timings[names[0]] if "python" in timings else 1.0
    print("n=%-9d %s  speedup %.1fx  flagged=%d  identical=%s"
          % (n, line, ratio, flagged, agree))
    if not agree:
        raise SystemExit("kernel outputs diverged at n=%d" % (n,))


def main(argv: list) -> None:
    sizes = [int(s) for s in argv] or [10 ** 5, 10 ** 6, 10 ** 7]
    kernels = {"python": kernel_for("python")}
    try:
        kernels["cython"] = kernel_for("cython")
    except (ImportError, ValueError):
        print("compiled kernel unavailable; timing the fallback alone")
    for n in sizes:
        one_size(n, kernels)


if __name__ == "__main__":
    main(sys.argv[1:])
