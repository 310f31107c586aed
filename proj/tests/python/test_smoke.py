"""Smoke tests for the python bindings: one round trip through every entry point."""

import math

import pytest

import cweno


def test_catalog_lists_ten_problems():
    cat = cweno.catalog()
    assert len(cat) == 10
    names = {p["name"] for p in cat}
    assert "sod" in names and "lax" in names and "leblanc" in names
    for p in cat:
        assert p["xb"] > p["xa"]
        assert p["t_final"] > 0
        assert p["default_cells"] >= 100


def test_run_returns_positive_profiles():
    out = cweno.run("sod", n=32, t_final=0.05)
    assert out["problem"] == "sod"
    assert out["n"] == 32
    assert out["t"] == pytest.approx(0.05)
    assert out["steps"] >= 1
    assert len(out["x"]) == 32
    assert all(r > 0 for r in out["rho"])
    assert all(p > 0 for p in out["p"])
    assert out["x"] == sorted(out["x"])
    assert out["minima"]["rho_all"] > 0
    assert out["minima"]["e_all"] > 0


def test_run_rejects_unknown_problem_and_scheme():
    with pytest.raises(cweno.SolverError):
        cweno.run("no-such-problem", n=16, t_final=0.01)
    with pytest.raises(cweno.SolverError):
        cweno.run("sod", n=16, t_final=0.01, scheme="bogus")


def test_converge_orders_improve_with_resolution():
    rows = cweno.converge("density-perturbation", ns=[10, 20])
    assert [r["n"] for r in rows] == [10, 20]
    assert rows[1]["l1"] < rows[0]["l1"]
    assert rows[1]["order_l1"] > 3.0


def test_compare_runs_multiple_schemes():
    rows = cweno.compare("sod", schemes=["fvcw", "weno-js"], n=24)
    assert [r["scheme"] for r in rows] == ["fvcw", "weno-js"]
    for r in rows:
        assert len(r["density"]) == 24
        assert r["min_rho"] > 0
        assert math.isfinite(r["l1"])


def test_riemann_star_state_and_vacuum_flag():
    sol = cweno.riemann([1.0, 0.0, 1.0], [0.125, 0.0, 0.1], xi=[-2.0, 0.0, 2.0])
    assert sol["p_star"] == pytest.approx(0.30313017805064682, rel=1e-10)
    assert sol["u_star"] == pytest.approx(0.92745262004894995, rel=1e-10)
    assert not sol["vacuum"]
    assert len(sol["rho"]) == 3
    assert sol["rho"][0] == pytest.approx(1.0)  # left of every wave

    vac = cweno.riemann([1.0, -5.0, 0.1], [1.0, 5.0, 0.1])
    assert vac["vacuum"]
