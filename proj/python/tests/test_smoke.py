import math

import pytest

import memwalk


def test_thresholds():
    assert memwalk.P1 == 11 / 16
    assert memwalk.P2 == 7 / 8
    assert memwalk.P3 == pytest.approx((113 + math.sqrt(97)) / 128, abs=1e-15)


def test_regimes():
    assert memwalk.regime(0.5) == "Diffusive"
    assert memwalk.regime(memwalk.P1) == "CriticalLower"
    assert memwalk.regime(0.875) == "OpenBoundary"
    assert memwalk.regime(0.95) == "BallisticSuperdiffusiveFluct"


def test_closed_forms():
    assert memwalk.sigma1(0.5) == pytest.approx(2 / 3, rel=1e-14)
    assert memwalk.sigma1(0.6) == pytest.approx(10 / 7, rel=1e-14)
    assert memwalk.speed_c(0.95) == pytest.approx(0.85533, abs=1e-5)
    assert memwalk.exponent_y(0.8) == pytest.approx(0.2, abs=1e-14)
    a, b = memwalk.alpha_beta(0.95)
    assert a + b == 1.0


def test_regime_error_is_value_error():
    with pytest.raises(ValueError):
        memwalk.sigma1(0.8)
    with pytest.raises(memwalk.RegimeError):
        memwalk.exponent_y(0.5)


def test_drift_zero_and_step_law():
    assert memwalk.drift(0.7, 1 / 3, 1 / 3) == pytest.approx((0.0, 0.0), abs=1e-15)
    assert memwalk.step_distribution(0.5, 4, 3, 1) == pytest.approx((0.25, 0.25, 0.5), abs=1e-15)


def test_fixed_points_match_newton():
    closed = sorted(fp["location"] for fp in memwalk.fixed_points(0.95))
    found = sorted(memwalk.newton_fixed_points(0.95))
    assert len(closed) == len(found) == 4
    for c, f in zip(closed, found):
        assert c == pytest.approx(f, abs=1e-10)


def test_simulate_is_deterministic():
    a = memwalk.simulate(0.6, 4096, replicas=50, seed=3, threads=1)
    b = memwalk.simulate(0.6, 4096, replicas=50, seed=3, threads=4)
    assert a == b
    assert a["n"][0] == 128 and a["n"][-1] == 4096
    assert all(abs(s) <= 4096 for s in a["final_positions"])


def test_ode_converges_to_symmetric_zero():
    terminal, kind, dist = memwalk.ode_integrate(0.6, 0.2, 0.1)
    assert kind == "gamma0"
    assert dist < 1e-6
