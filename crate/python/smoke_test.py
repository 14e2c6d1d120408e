"""Smoke test for the tspgaplab Python extension.

Build and install first:
    cd crates/py && maturin build --release -o dist && pip install dist/*.whl
then run:
    python3 python/smoke_test.py
"""

import math

import tspgaplab as lab


def check_unique():
    inst = lab.Instance.unique(5)
    assert inst.kind == "gap" and inst.n == 5
    assert inst.costs()[1][2] == 10 and inst.costs()[0][0] is None
    sol = lab.solve(inst)
    assert sol.opt_cost == 972, sol
    assert sol.opt_tours == [[1, 3, 4, 2, 5]]
    assert sol.distinct_costs is True
    assert sol.cycles_evaluated == 24
    assert inst.tour_cost([1, 3, 4, 2, 5]) == 972
    again = lab.Instance.parse(inst.to_text())
    assert again.to_text() == inst.to_text()


def check_guard():
    big = lab.Instance.unique(13)
    try:
        lab.solve(big)
    except lab.GuardExceededError:
        pass
    else:
        raise AssertionError("guard not enforced")


def check_geometry():
    inst = lab.Instance.random_points(8, 3)
    r = lab.reduce(inst)
    assert r["contained"] and r["optimum_preserved"]
    assert r["reduced_opt_cost"] == r["full_opt_cost"]
    audit = lab.triangle_audit(inst)
    assert audit["violations"] == 0
    fr = lab.frontier(inst)
    assert len(fr["ranks"]) == 8 and 0 < fr["elongation"] <= 1


def check_stochastic():
    inst = lab.Instance.unique(5)
    est = lab.estimate_hit_rate(inst, 20000, 1)
    assert math.isclose(est["theoretical"], 1 / 24)
    assert est["samples"] == 20000
    assert lab.sample_cycles(5, 50, 9) == lab.sample_cycles(5, 50, 9)
    b = lab.bounds_report(10)
    assert b["p_j"] == "5/18144" and b["a_star"] == "25/18"
    assert lab.bounds_report(4)["p_j_exceeds_one"]


def check_combinatorics():
    assert lab.cycle_count(6) == 120
    assert lab.max_coincident_edges(6) == 3
    mono = lab.monotonicity_check(lab.Instance.unique(3))
    assert mono["short"] == [2, 3] and mono["long"] == [2, 1, 3]
    assert (mono["short_cost"], mono["long_cost"]) == (6, 5)


def check_compose():
    a = lab.Instance.random_points(4, 1)
    b = lab.Instance.random_gap(4, 2)
    comp = lab.compose(a, b, 7, 0.0, 1.0)
    assert comp.n == 8
    s = lab.preservation_search(a, b, list(range(20)), 0.0, 1.0)
    assert 0.0 <= s["preserved_fraction"] <= 1.0
    assert s["csv"].startswith("seed,composed_opt_cost,sub_preserved,triangle_violations")


if __name__ == "__main__":
    for check in (check_unique, check_guard, check_geometry, check_stochastic,
                  check_combinatorics, check_compose):
        check()
        print("ok", check.__name__)
    print("smoke test passed")
