import numpy as np
import pytest

from growdom import (
    Field,
    check_comparison,
    check_laplacian_sign,
    initial_condition,
    make_envelopes,
    principal_eigen_analytic,
    random_ordered_pair,
    sandwich_run,
    stable_dt,
)
from growdom.verify import EnvelopePair, write_violations_csv


@pytest.fixture
def eigenpair(unit_interval):
    return principal_eigen_analytic(unit_interval)


def test_envelopes_of_eigenfunction(eigenpair):
    env = make_envelopes(eigenpair.phi, eigenpair)
    assert env.upper_amplitude == pytest.approx(1.01, rel=1e-12)
    assert env.lower_amplitude == pytest.approx(0.99, rel=1e-12)


def test_envelopes_scale_linearly(eigenpair):
    v0 = eigenpair.phi.with_values(2.0 * eigenpair.phi.values)
    env = make_envelopes(v0, eigenpair)
    assert env.upper_amplitude == pytest.approx(2.02, rel=1e-12)
    assert env.lower_amplitude == pytest.approx(1.98, rel=1e-12)


def test_envelopes_bracket_pointwise(eigenpair, rng, unit_interval):
    lo, hi = random_ordered_pair(unit_interval, rng)
    env = make_envelopes(hi, eigenpair)
    phi = eigenpair.phi.values
    assert np.all(env.upper_amplitude * phi >= hi.values - 1e-12)
    assert np.all(env.lower_amplitude * phi <= hi.values + 1e-12)


def test_envelopes_of_bump_have_zero_lower(eigenpair, unit_interval):
    bump = initial_condition("bump", unit_interval)
    env = make_envelopes(bump, eigenpair)
    assert env.lower_amplitude == 0.0
    assert np.isfinite(env.upper_amplitude) and env.upper_amplitude > 0.0


def test_envelopes_reject_negative_data(eigenpair, unit_interval):
    v = Field(unit_interval, -np.ones(199))
    with pytest.raises(ValueError):
        make_envelopes(v, eigenpair)


def test_comparison_zero_vs_anything(params_extinction, unit_interval):
    v0 = initial_condition("sin_pi", unit_interval)
    report = check_comparison(
        Field.zeros(unit_interval), v0, params_extinction, t_end=1.0,
        dt=stable_dt(params_extinction),
    )
    assert report.passed


def test_comparison_half_vs_full(params_extinction, unit_interval):
    v0 = initial_condition("sin_pi", unit_interval)
    report = check_comparison(
        v0.with_values(0.5 * v0.values), v0, params_extinction, t_end=5.0,
        dt=stable_dt(params_extinction),
    )
    assert report.passed
    assert report.max_violation <= 1e-10


def test_comparison_identical_inputs_exact_equality(params_persistence, unit_interval):
    v0 = initial_condition("sin_pi", unit_interval)
    report = check_comparison(
        v0, v0.copy(), params_persistence, t_end=1.0, dt=stable_dt(params_persistence)
    )
    assert report.passed
    assert report.max_violation == 0.0


def test_comparison_rejects_unordered_pair(params_extinction, unit_interval):
    v0 = initial_condition("sin_pi", unit_interval)
    with pytest.raises(ValueError):
        check_comparison(v0, v0.with_values(0.5 * v0.values), params_extinction, 1.0, 0.01)


def test_laplacian_sign_eigenfunction(params_extinction, unit_interval):
    v0 = initial_condition("eigen", unit_interval)
    report = check_laplacian_sign(
        v0, params_extinction, t_end=5.0, dt=stable_dt(params_extinction)
    )
    assert report.passed
    assert report.max_excess <= 0.0


def test_laplacian_sign_rejects_bump(params_extinction, unit_interval):
    # the bump's discrete Laplacian changes sign, violating the precondition
    bump = initial_condition("bump", unit_interval)
    with pytest.raises(ValueError):
        check_laplacian_sign(bump, params_extinction, t_end=1.0, dt=0.01)


def test_laplacian_sign_zero_field(params_extinction, unit_interval):
    report = check_laplacian_sign(
        Field.zeros(unit_interval), params_extinction, t_end=0.5, dt=0.01
    )
    assert report.passed


def test_laplacian_sign_tracks_near_boundary_separately(params_persistence, unit_interval):
    v0 = initial_condition("eigen", unit_interval)
    report = check_laplacian_sign(
        v0, params_persistence, t_end=2.0, dt=stable_dt(params_persistence)
    )
    assert report.max_lap_near_boundary.size == report.times.size
    assert report.max_lap_interior.size == report.times.size


def test_sandwich_requires_persistence(params_extinction, unit_interval):
    v0 = initial_condition("sin_pi", unit_interval)
    with pytest.raises(ValueError):
        sandwich_run(v0, params_extinction, t_end=1.0, dt=0.01)


def test_sandwich_rejects_vanishing_data(params_persistence, unit_interval):
    bump = initial_condition("bump", unit_interval)
    with pytest.raises(ValueError):
        sandwich_run(bump, params_persistence, t_end=1.0, dt=0.01)


def test_sandwich_converges(params_persistence, unit_interval):
    v0 = initial_condition("sin_pi", unit_interval)
    report = sandwich_run(
        v0, params_persistence, t_end=60.0, dt=stable_dt(params_persistence)
    )
    assert report.passed
    assert report.ordering_ok
    assert report.final_mutual_distance < 5e-3
    assert report.steady_distance < 5e-3


def test_sandwich_with_explicit_envelopes_upper_equals_middle(
    params_persistence, unit_interval, eigenpair
):
    # passing the envelope pair directly makes v0 = M phi the upper
    # trajectory itself, so upper and middle coincide exactly
    M, delta = 1.5, 0.5
    v0 = Field(unit_interval, M * eigenpair.phi.values)
    env = EnvelopePair(M, delta, eigenpair)
    report = sandwich_run(
        v0, params_persistence, t_end=2.0, dt=stable_dt(params_persistence), envelopes=env
    )
    assert report.ordering_ok
    # mutual distance reduces to the lower-vs-middle gap; upper == middle
    assert report.max_ordering_violation == 0.0


def test_sandwich_settles_monotonically(params_persistence, unit_interval):
    v0 = initial_condition("sin_pi", unit_interval, amplitude=0.6)
    report = sandwich_run(
        v0, params_persistence, t_end=10.0, dt=stable_dt(params_persistence)
    )
    tail = report.mutual_distances[-10:]
    assert np.all(np.diff(tail) <= 1e-13)


def test_random_pairs_are_admissible(rng, unit_interval):
    for _ in range(20):
        lo, hi = random_ordered_pair(unit_interval, rng)
        assert np.all(lo.values > 0.0)
        assert np.all(hi.values >= lo.values)


def test_random_pairs_2d(rng):
    from growdom import Grid

    grid = Grid((1.0, 1.0), (9, 9))
    lo, hi = random_ordered_pair(grid, rng)
    assert lo.values.shape == (9, 9)
    assert np.all(lo.values > 0.0)
    assert np.all(hi.values >= lo.values)


def test_violation_csv_export(tmp_path, params_extinction, unit_interval):
    v0 = initial_condition("sin_pi", unit_interval)
    report = check_comparison(
        v0.with_values(0.5 * v0.values), v0, params_extinction, t_end=1.0,
        dt=stable_dt(params_extinction),
    )
    path = tmp_path / "violations.csv"
    write_violations_csv(report, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "t,violation"
    assert len(lines) == report.times.size + 1
