import numpy as np
import pytest

from growdom import (
    Field,
    Grid,
    GrowthFunction,
    ModelParams,
    SteadyRegime,
    residual,
    solve_steady,
)
from growdom.steady import summary_line


def test_extinction_params_give_trivial(params_extinction):
    result = solve_steady(params_extinction)
    assert result.regime is SteadyRegime.TRIVIAL
    assert np.all(result.field.values == 0.0)
    assert result.residual == 0.0


def test_persistence_params_give_positive(params_persistence):
    result = solve_steady(params_persistence)
    assert result.regime is SteadyRegime.POSITIVE
    assert np.all(result.field.values > 0.0)
    # spatially uniform supersolution K(1-h/r) = 3.5 bounds the state
    assert 0.0 < np.max(result.field.values) < 3.5
    assert result.residual < 1e-11
    assert result.newton_iters <= 15


def test_harvest_at_least_r_gives_trivial(unit_interval, logistic_growth):
    p = ModelParams(0.9, 2.0, 4.0, 2.0, logistic_growth, unit_interval)
    assert solve_steady(p).regime is SteadyRegime.TRIVIAL
    p = ModelParams(0.9, 2.0, 4.0, 3.1, logistic_growth, unit_interval)
    assert solve_steady(p).regime is SteadyRegime.TRIVIAL


def test_residual_of_zero_field(params_persistence):
    assert residual(Field.zeros(params_persistence.grid), params_persistence) == 0.0


def test_residual_of_solution_below_tol(params_persistence):
    result = solve_steady(params_persistence, tol=1e-11)
    assert residual(result.field, params_persistence) < 1e-11


def test_residual_of_flat_supersolution(params_persistence):
    # constant K(1-h/r) ignores the boundary; the stencil at the nodes next
    # to the boundary sees the zero ghost and leaves a large residual
    flat = Field(
        params_persistence.grid,
        np.full(params_persistence.grid.shape, 3.5),
    )
    r = residual(flat, params_persistence)
    assert r > 1.0


def test_supersolution_bound_pointwise(params_persistence):
    result = solve_steady(params_persistence)
    assert np.all(result.field.values <= 3.5 + 1e-10)


def test_monotone_in_harvest(unit_interval, logistic_growth):
    fields = {}
    for h in (0.5, 1.0):
        p = ModelParams(0.9, 4.0, 4.0, h, logistic_growth, unit_interval)
        fields[h] = solve_steady(p).field.values
    assert np.all(fields[0.5] >= fields[1.0] - 1e-8)


def test_monotone_in_final_size(unit_interval):
    # larger final habitat raises the steady state pointwise
    fields = {}
    for m in (1.7, 2.5):
        p = ModelParams(0.9, 4.0, 4.0, 0.5, GrowthFunction.logistic(1.0, m), unit_interval)
        fields[m] = solve_steady(p).field.values
    assert np.all(fields[2.5] >= fields[1.7] - 1e-8)


def test_grid_convergence_second_order():
    # tol sits above the discrete-residual roundoff floor, which grows
    # like 1/dy^2 and exceeds the 1e-11 default at N=399
    maxes = []
    for n in (99, 199, 399):
        p = ModelParams(0.9, 4.0, 4.0, 0.5, GrowthFunction.logistic(1.0, 2.0), Grid((1.0,), (n,)))
        maxes.append(np.max(solve_steady(p, tol=1e-10).field.values))
    inc1 = abs(maxes[1] - maxes[0])
    inc2 = abs(maxes[2] - maxes[1])
    assert 3.0 <= inc1 / inc2 <= 5.0


def test_2d_positive_state():
    grid = Grid((1.0, 1.0), (29, 29))
    # unit square: lambda1 = 2 pi^2, threshold = 0.9 * 2 pi^2 / 4 + 0.5 = 4.94
    p = ModelParams(0.9, 8.0, 4.0, 0.5, GrowthFunction.logistic(1.0, 2.0), grid)
    result = solve_steady(p)
    assert result.regime is SteadyRegime.POSITIVE
    assert np.all(result.field.values > 0.0)
    assert np.max(result.field.values) < 4.0 * (1.0 - 0.5 / 8.0) + 1e-10


def test_constant_growth_uses_m_equal_one(unit_interval):
    # fixed-domain problem: threshold is d*lambda1 with no 1/m^2 reduction
    d, lam1 = 0.9, np.pi**2
    p = ModelParams(d, 1.1 * d * lam1, 4.0, 0.0, GrowthFunction.constant(), unit_interval)
    result = solve_steady(p)
    assert result.regime is SteadyRegime.POSITIVE
    p = ModelParams(d, 0.9 * d * lam1, 4.0, 0.0, GrowthFunction.constant(), unit_interval)
    assert solve_steady(p).regime is SteadyRegime.TRIVIAL


def test_invalid_tol(params_persistence):
    with pytest.raises(ValueError):
        solve_steady(params_persistence, tol=-1.0)


def test_summary_line_format(params_persistence):
    line = summary_line(solve_steady(params_persistence))
    assert line.startswith("Positive, residual ")
    assert "iterations" in line and "max 1.49" in line
