"""Smoke test for the `deconflict` extension module.

Build with `maturin develop -m crates/py/Cargo.toml`, or copy the built
`libdeconflict.so` next to this file as `deconflict.so`, then run
`python crates/py/python/smoke_test.py`.
"""

import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import deconflict as dc


def close(a, b, tol=1e-6):
    return abs(a - b) <= tol


def main():
    a = dc.Mission("a", (0.0, 10.0), (20.0, 10.0), 1.0)
    b = dc.Mission("b", (10.0, 0.0), (10.0, 20.0), 1.0)
    f = dc.forbidden_interval(a, b, h=1.5)
    assert f.kind == "bounded", f
    assert close(f.lo, -1.5 * math.sqrt(2)) and close(f.hi, 1.5 * math.sqrt(2)), f
    assert f.contains(0.0) and not f.contains(3.0)

    s = dc.greedy_schedule([a, b], h=1.5)
    assert s.departures["a"] == 0.0
    assert close(s.departures["b"], f.hi)
    assert s.bindings["b"] == ["a"]

    missions = dc.generate_topology(5, seed=3)
    assert len(missions) == 5
    best = dc.optimize_order(missions)
    for order_seed in range(3):
        other = dc.greedy_schedule(missions[order_seed:] + missions[:order_seed])
        assert best.total_delay <= other.total_delay + 1e-9

    delays = dc.run_monte_carlo(4, 20, seed=1, mode="pooled")
    assert len(delays) == 20 * 24
    assert delays == dc.run_monte_carlo(4, 20, seed=1, mode="pooled")

    positive = [d for d in delays if d > 0]
    fit = dc.select_best(positive)
    assert fit["family"] in {"Normal", "LogNormal", "Beta", "Gamma"}, fit
    assert fit["ssr"] >= 0
    g = dc.fit(positive, "gamma")
    assert g["params"]["shape"] > 0

    x, y = dc.project((33.901, -84.468), (33.637, -84.428))
    assert 29_000 < math.hypot(x, y) < 30_000

    try:
        dc.Mission("bad", (0.0, 0.0), (0.0, 0.0), 1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("degenerate mission accepted")

    try:
        dc.greedy_schedule([a, b], h=1.5, horizon=1.0)
    except RuntimeError:
        pass
    else:
        raise AssertionError("infeasible horizon accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
