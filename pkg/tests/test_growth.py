import numpy as np
import pytest

from growdom import Field, Grid, GrowthFamily, GrowthFunction, pushforward


def test_logistic_at_zero_is_one():
    g = GrowthFunction.logistic(1.0, 2.0)
    assert g.rho(0.0) == 1.0


def test_logistic_saturates_at_m():
    g = GrowthFunction.logistic(1.0, 2.0)
    assert g.rho(100.0) == pytest.approx(2.0, abs=1e-12)
    assert g.rho(1e6) == pytest.approx(2.0, abs=1e-15)


def test_logistic_closed_form_value():
    # 30-digit evaluation of exp(k)/(1 + (exp(k)-1)/m) at k=1, m=2
    g = GrowthFunction.logistic(1.0, 2.0)
    assert g.rho(1.0) == pytest.approx(1.46211715726000975850231848364, rel=1e-15)


def test_relative_rate_at_zero():
    # symbolic derivative of the closed form gives k(1 - 1/m) at t=0
    g = GrowthFunction.logistic(1.0, 2.0)
    assert g.rho_dot_over_rho(0.0) == pytest.approx(0.5, rel=1e-15)


def test_relative_rate_decays():
    # bounded by k(m-1)exp(-kt); at t=20 that is ~2.06e-9
    g = GrowthFunction.logistic(1.0, 2.0)
    assert g.rho_dot_over_rho(20.0) < 1e-8


def test_constant_family():
    g = GrowthFunction.constant()
    assert g.rho(3.7) == 1.0
    assert g.rho_dot(3.7) == 0.0
    assert g.rho_dot_over_rho(12.0) == 0.0
    assert g.family is GrowthFamily.CONSTANT


def test_negative_time_rejected():
    g = GrowthFunction.logistic(1.0, 2.0)
    for method in (g.rho, g.rho_dot, g.rho_dot_over_rho):
        with pytest.raises(ValueError):
            method(-0.1)


def test_invalid_parameters_rejected():
    with pytest.raises(ValueError):
        GrowthFunction.logistic(0.0, 2.0)
    with pytest.raises(ValueError):
        GrowthFunction.logistic(1.0, 1.0)
    with pytest.raises(ValueError):
        GrowthFunction(GrowthFamily.CONSTANT, k=0.0, m=2.0)


def test_derivative_identity_to_machine_precision():
    # rho_dot computed from its own closed form must satisfy the defining ODE
    g = GrowthFunction.logistic(1.0, 2.0)
    t = np.linspace(0.0, 50.0, 1000)
    lhs = g.rho_dot(t)
    rho = g.rho(t)
    rhs = g.k * rho * (1.0 - rho / g.m)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


@pytest.mark.parametrize("k,m", [(1.0, 2.0), (0.3, 5.0), (2.5, 1.2)])
def test_monotone_and_bounded(k, m, rng):
    g = GrowthFunction.logistic(k, m)
    t = np.sort(rng.uniform(0.0, 50.0, size=500))
    rho = g.rho(t)
    assert np.all(np.diff(rho) >= 0.0)
    assert np.all(rho >= 1.0)
    assert np.all(rho <= m)
    rates = g.rho_dot_over_rho(t)
    assert np.all(rates >= 0.0)
    assert np.all(np.diff(rates) <= 1e-15)


def test_dilution_factor_telescopes():
    g = GrowthFunction.logistic(1.0, 2.0)
    f = 1.0
    ts = np.linspace(0.0, 5.0, 101)
    for t0, t1 in zip(ts[:-1], ts[1:]):
        f *= g.dilution_factor(t0, t1, ndim=1)
    assert f == pytest.approx(1.0 / g.rho(5.0), rel=1e-13)


def test_pushforward_identity_at_zero(unit_interval):
    g = GrowthFunction.logistic(1.0, 2.0)
    v = Field(unit_interval, np.linspace(0.1, 0.9, 199))
    coords, values = pushforward(v, g, 0.0)
    np.testing.assert_array_equal(coords[0], unit_interval.axis(0))
    np.testing.assert_array_equal(values, v.values)


def test_pushforward_spans_grown_domain(unit_interval):
    g = GrowthFunction.logistic(1.0, 2.0)
    v = Field(unit_interval, np.ones(199))
    coords, _ = pushforward(v, g, 100.0)
    # reference (0,1) carried to (0,2): last node approaches 2 * N/(N+1)
    assert coords[0][-1] == pytest.approx(2.0 * 199 / 200, rel=1e-12)


def test_pushforward_preserves_values(rng):
    grid = Grid((1.0, 2.0), (9, 13))
    g = GrowthFunction.logistic(1.0, 2.0)
    v = Field(grid, rng.uniform(0.0, 1.0, size=grid.shape))
    coords, values = pushforward(v, g, 2.5)
    assert len(coords) == 2
    np.testing.assert_array_equal(values, v.values)
    assert values is not v.values
