"""Smoke test for the splinewidth Python extension.

Run after `cargo build --release -p splinewidth-py --features extension-module`:

    python3 python/smoke_test.py

If `splinewidth` is not importable, the compiled library is copied from
target/release into a temporary directory under the module name.
"""

import math
import os
import shutil
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load():
    try:
        import splinewidth
        return splinewidth
    except ImportError:
        pass
    lib = os.environ.get("SPLINEWIDTH_LIB", os.path.join(ROOT, "target", "release", "libsplinewidth_py.so"))
    if not os.path.exists(lib):
        sys.exit(f"no compiled extension at {lib}; build it first")
    tmp = tempfile.mkdtemp()
    shutil.copy(lib, os.path.join(tmp, "splinewidth.so"))
    sys.path.insert(0, tmp)
    import splinewidth
    return splinewidth


def close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    sw = load()

    # Poincare: p = 0 on one interval, cos(pi x) attains (h/pi) |u|_1
    space = sw.SplineSpace(sw.BreakSequence.uniform(1), 0)
    rep = sw.bound_report(space, sw.Function("cos_1"), r=1)
    assert close(rep["ratio"], 1.0, 1e-9), rep

    # L2 projection of a cubic is exact in a cubic space
    breaks = sw.BreakSequence.random(6, 0.03, seed=7)
    cubic = sw.SplineSpace(breaks, 3)
    u = sw.Function("poly_3")
    c = sw.project(cubic, u)
    assert sw.error_norm(cubic, u, c) < 1e-12
    assert close(cubic.eval(c, 0.3), 0.027, 1e-12)

    # python callables work as functions: sin(pi x) by hand vs the catalog
    derivs = [math.sin, math.cos, lambda t: -math.sin(t), lambda t: -math.cos(t)]
    mine = sw.Function.custom("mine", 3, lambda x, l: math.pi**l * derivs[l % 4](math.pi * x))
    per = sw.SplineSpace.periodic(sw.BreakSequence.uniform(8), 3)
    a = sw.project(per, mine, q=1)
    b = sw.project(per, sw.Function("sin_1"), q=1)
    assert max(abs(x - y) for x, y in zip(a, b)) < 1e-12

    # p = 1, n = 2: the periodic Laplacian has eigenvalues 0 and 48
    spec = sw.laplace_spectrum(sw.SplineSpace.periodic(sw.BreakSequence.uniform(2), 1))
    assert close(spec["values"][0], 0.0, 1e-10) and close(spec["values"][1], 48.0, 1e-10), spec["values"]

    prof = sw.branch_profile(100, 4, 1)
    assert prof["dim"] == 300 and prof["branches"] == 3

    inv = sw.inverse_report(sw.SplineSpace.periodic(sw.BreakSequence.uniform(10), 3))
    assert inv["conforming"] and inv["passed"]

    # optimal periodic space: E(A^1_per) equals the n-width
    rep = sw.residual_operator_norm(sw.SplineSpace.periodic(sw.BreakSequence.uniform(8), 1), "a_per", 1, grid=1000)
    assert rep["certified"] and abs(rep["ratio"] - 1.0) < 5e-3, rep

    assert sw.periodic_eigconv(10, [2, 3, 4])["within_bounds"]
    assert sw.optimal_space(0, 5, 3).dim == 5

    try:
        sw.bound_report(cubic, sw.Function("exp"), r=6)
    except sw.HypothesisError:
        pass
    else:
        raise AssertionError("r > p + 1 should be rejected")
    try:
        sw.SplineSpace(breaks, 2, family="bogus")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown family accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
